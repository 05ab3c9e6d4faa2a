#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "aaqs/aaqs.h"

using nlohmann::json;

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("aaqs_capi_" + std::to_string(static_cast<unsigned>(::getpid())));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::string file(const char* name) const { return (path / name).string(); }
};

json call_ok(aaqs_status (*op)(const char*, char**), const json& cfg) {
    char* out = nullptr;
    aaqs_status st = op(cfg.dump().c_str(), &out);
    INFO("error: ", aaqs_last_error_message());
    REQUIRE(st == AAQS_OK);
    REQUIRE(out != nullptr);
    json j = json::parse(out);
    aaqs_string_free(out);
    return j;
}

}  // namespace

TEST_CASE("status names cover the enum") {
    CHECK(std::strcmp(aaqs_status_name(AAQS_OK), "ok") == 0);
    CHECK(std::strcmp(aaqs_status_name(AAQS_ERR_INVALID_ARGUMENT), "invalid_argument") == 0);
    CHECK(std::strcmp(aaqs_status_name(AAQS_ERR_DOMAIN), "domain_error") == 0);
    CHECK(std::strcmp(aaqs_status_name(AAQS_ERR_STATE), "state_error") == 0);
    CHECK(std::strcmp(aaqs_status_name(AAQS_ERR_IO), "io_error") == 0);
    CHECK(std::strcmp(aaqs_status_name(AAQS_ERR_INTERNAL), "internal_error") == 0);
}

TEST_CASE("generator handle lifecycle and evaluation") {
    aaqs_generator* gen = nullptr;
    REQUIRE(aaqs_generator_create("square", &gen) == AAQS_OK);
    REQUIRE(gen != nullptr);

    double y = 0.0;
    CHECK(aaqs_generator_u(gen, 3.0, &y) == AAQS_OK);
    CHECK(y == 9.0);
    CHECK(aaqs_generator_u_inv(gen, 9.0, &y) == AAQS_OK);
    CHECK(y == doctest::Approx(3.0).epsilon(1e-14));

    const double xs[3] = {3.0, 4.0, 12.0};
    double value = 0.0;
    int overflow = -1;
    CHECK(aaqs_generator_quasi_sum(gen, xs, 3, &value, &overflow) == AAQS_OK);
    CHECK(value == doctest::Approx(13.0).epsilon(1e-12));
    CHECK(overflow == 0);

    CHECK(aaqs_generator_fold(gen, 3.0, 4.0, &value, &overflow) == AAQS_OK);
    CHECK(value == doctest::Approx(5.0).epsilon(1e-12));

    aaqs_generator_destroy(gen);
    aaqs_generator_destroy(nullptr);  // no-op
}

TEST_CASE("error paths set status and message") {
    aaqs_generator* gen = nullptr;
    CHECK(aaqs_generator_create("warp", &gen) == AAQS_ERR_INVALID_ARGUMENT);
    CHECK(std::strlen(aaqs_last_error_message()) > 0);
    CHECK(aaqs_generator_create(nullptr, &gen) == AAQS_ERR_INVALID_ARGUMENT);
    CHECK(aaqs_generator_create("sum", nullptr) == AAQS_ERR_INVALID_ARGUMENT);

    char* out = nullptr;
    CHECK(aaqs_run_synthetic("not json", &out) == AAQS_ERR_INVALID_ARGUMENT);
    CHECK(std::string(aaqs_last_error_message()).rfind("config:", 0) == 0);
    CHECK(aaqs_run_synthetic("[1,2]", &out) == AAQS_ERR_INVALID_ARGUMENT);
    CHECK(aaqs_run_synthetic(nullptr, &out) == AAQS_ERR_INVALID_ARGUMENT);
    CHECK(aaqs_check_bounds("{}", &out) == AAQS_ERR_INVALID_ARGUMENT);  // missing trace

    json missing = {{"trace", "/nonexistent/trace.csv"}, {"generator", "sum"}};
    CHECK(aaqs_check_bounds(missing.dump().c_str(), &out) == AAQS_ERR_IO);
}

TEST_CASE("synthetic run, trace round-trip, and bounds re-check") {
    TempDir tmp;
    std::string trace_path = tmp.file("trace.csv");
    json cfg = {{"generator", "sum"}, {"eta", 1.0},  {"loss", "log"},
                {"experts", 4},        {"rounds", 60}, {"seed", 12},
                {"trace_out", trace_path}};
    json out = call_ok(aaqs_run_synthetic, cfg);
    CHECK(out.at("bound").at("satisfied").get<bool>());
    CHECK(out.at("apa").at("identity_ok").get<bool>());
    CHECK(out.at("substitution").get<std::string>() == "logloss_exact");

    aaqs_trace* trace = nullptr;
    REQUIRE(aaqs_trace_load(trace_path.c_str(), &trace) == AAQS_OK);
    CHECK(aaqs_trace_rounds(trace) == 60);
    CHECK(aaqs_trace_num_experts(trace) == 4);
    CHECK(aaqs_trace_num_outcomes(trace) == 2);
    double loss = -1.0;
    CHECK(aaqs_trace_learner_loss(trace, 0, &loss) == AAQS_OK);
    CHECK(loss >= 0.0);
    CHECK(aaqs_trace_expert_loss(trace, 59, 3, &loss) == AAQS_OK);
    CHECK(aaqs_trace_learner_loss(trace, 60, &loss) == AAQS_ERR_INVALID_ARGUMENT);
    CHECK(aaqs_trace_expert_loss(trace, 0, 4, &loss) == AAQS_ERR_INVALID_ARGUMENT);

    std::string copy_path = tmp.file("copy.csv");
    CHECK(aaqs_trace_save(trace, copy_path.c_str()) == AAQS_OK);
    aaqs_trace_destroy(trace);
    aaqs_trace_destroy(nullptr);

    json bounds_cfg = {{"trace", copy_path}, {"generator", "sum"}, {"eta", 1.0}};
    json rb = call_ok(aaqs_check_bounds, bounds_cfg);
    CHECK(rb.at("bound").at("satisfied").get<bool>());
    CHECK(rb.at("apa").at("identity_ok").get<bool>());

    // same trace under the scaled bound with an explicit c
    bounds_cfg["c"] = 1.5;
    json rc = call_ok(aaqs_check_bounds, bounds_cfg);
    CHECK(rc.at("bound").at("c").get<double>() == 1.5);
}

TEST_CASE("mixability and axioms through the boundary") {
    json mix_cfg = {{"generator", "sum"}, {"eta", 1.0}, {"loss", "log"}, {"resolution", 60}};
    json mix = call_ok(aaqs_estimate_mixability, mix_cfg);
    CHECK(mix.at("mixable").get<bool>());
    double c_hat = mix.at("direct").at("c_hat").get<double>();
    CHECK(c_hat >= 1.0 - 1e-9);
    CHECK(c_hat <= 1.0 + 1e-6);

    json ax_cfg = {{"generator", "focal"}, {"triples", 300}, {"seed", 5}};
    json ax = call_ok(aaqs_check_axioms, ax_cfg);
    CHECK(ax.at("associativity").get<bool>());
    CHECK_FALSE(ax.at("homogeneity").get<bool>());
}

TEST_CASE("global game and frontier through the boundary") {
    TempDir tmp;
    std::string transcript = tmp.file("transcript.csv");
    json cfg = {{"generator", "sum"}, {"eta", 1.0},   {"loss", "log"},
                {"experts", 2},        {"rounds", 12}, {"c", 1.0},
                {"a", 1.0},            {"seed", 3},    {"move_resolution", 50},
                {"transcript_out", transcript}};
    json game = call_ok(aaqs_play_global_game, cfg);
    CHECK(game.at("learner_wins").get<bool>());
    CHECK(game.at("rounds").get<int>() == 12);
    CHECK(std::filesystem::exists(transcript));

    json replay_cfg = cfg;
    replay_cfg.erase("transcript_out");
    replay_cfg["environment"] = "replay";
    replay_cfg["transcript"] = transcript;
    json replay = call_ok(aaqs_play_global_game, replay_cfg);
    CHECK(replay.at("learner_aggregate_u").get<double>() ==
          game.at("learner_aggregate_u").get<double>());

    json bad_env = cfg;
    bad_env["environment"] = "psychic";
    char* out = nullptr;
    CHECK(aaqs_play_global_game(bad_env.dump().c_str(), &out) == AAQS_ERR_INVALID_ARGUMENT);

    json fr_cfg = {{"generator", "sum"}, {"eta", 1.0}, {"loss", "log"},
                   {"experts", 2},        {"rounds", 10}, {"seed", 3},
                   {"move_resolution", 50}, {"c_values", {0.9, 1.1}},
                   {"a_values", {0.0, 1.0}}};
    json fr = call_ok(aaqs_frontier_scan, fr_cfg);
    REQUIRE(fr.at("wins").size() == 2);
    CHECK(fr.at("wins")[1][1].get<int>() == 1);
}

TEST_CASE("weather op writes artifacts") {
    TempDir tmp;
    json cfg = {{"station_file", std::string(FIXTURE_DIR) + "/dwd_sample.csv"},
                {"out_dir", tmp.file("out")},
                {"runs", {{{"generator", "sum"}, {"eta", 1.0}}}}};
    json rep = call_ok(aaqs_run_weather, cfg);
    CHECK(rep.at("dataset").at("cleaned").get<int>() == 13);
    CHECK(rep.at("runs").size() == 1);

    std::filesystem::path out(tmp.file("out"));
    CHECK(std::filesystem::exists(out / "summary.json"));
    CHECK(std::filesystem::exists(out / "hist_0_sum.csv"));
    CHECK(std::filesystem::exists(out / "expert_hist_0.csv"));
    CHECK(std::filesystem::exists(out / "expert_hist_1.csv"));
    CHECK_FALSE(std::filesystem::exists(out / "trace_0.csv"));  // write_traces off
}
