#include "aaqs/aaqs.h"

#include <cctype>
#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <memory>
#include <string>

#include <json.hpp>

#include "aaqs/adversary.hpp"
#include "aaqs/aggregation.hpp"
#include "aaqs/bounds.hpp"
#include "aaqs/engine.hpp"
#include "aaqs/substitution.hpp"
#include "aaqs/synthetic.hpp"
#include "aaqs/trace_io.hpp"
#include "aaqs/weather.hpp"

using nlohmann::json;

struct aaqs_generator {
    aaqs::Generator gen;
};

struct aaqs_trace {
    aaqs::GameTrace trace;
};

namespace {

thread_local std::string t_last_error;

template <typename F>
aaqs_status guarded(F&& f) {
    try {
        f();
        t_last_error.clear();
        return AAQS_OK;
    } catch (const aaqs::IoError& e) {
        t_last_error = e.what();
        return AAQS_ERR_IO;
    } catch (const json::exception& e) {
        t_last_error = std::string("config: ") + e.what();
        return AAQS_ERR_INVALID_ARGUMENT;
    } catch (const std::invalid_argument& e) {
        t_last_error = e.what();
        return AAQS_ERR_INVALID_ARGUMENT;
    } catch (const std::domain_error& e) {
        t_last_error = e.what();
        return AAQS_ERR_DOMAIN;
    } catch (const std::runtime_error& e) {
        t_last_error = e.what();
        return AAQS_ERR_STATE;
    } catch (const std::exception& e) {
        t_last_error = e.what();
        return AAQS_ERR_INTERNAL;
    }
}

char* dup_string(const std::string& s) {
    char* p = static_cast<char*>(std::malloc(s.size() + 1));
    if (!p) return nullptr;
    std::memcpy(p, s.c_str(), s.size() + 1);
    return p;
}

json parse_config(const char* config_json) {
    if (!config_json) throw std::invalid_argument("config must not be null");
    json j = json::parse(config_json);
    if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
    return j;
}

void require_out(const void* p, const char* what) {
    if (!p) throw std::invalid_argument(std::string(what) + " must not be null");
}

std::string jreq_str(const json& j, const char* key) {
    if (!j.contains(key)) throw std::invalid_argument(std::string("config key missing: ") + key);
    return j.at(key).get<std::string>();
}

void emit(char** out_json, const json& j) {
    require_out(out_json, "out_json");
    *out_json = dup_string(j.dump(2));
    if (!*out_json) throw std::runtime_error("allocation failed");
}

aaqs::PredictionGameSpec spec_from(const json& j, bool need_loss) {
    aaqs::PredictionGameSpec spec;
    spec.profile = aaqs::make_profile(aaqs::Generator::from_key(jreq_str(j, "generator")),
                                      j.value("eta", 1.0));
    if (need_loss) spec.loss = aaqs::LossFunction::from_key(j.value("loss", "log"));
    spec.num_outcomes = j.value("outcomes", 2);
    spec.num_experts = j.value("experts", 1);
    return spec;
}

std::string sanitize(const std::string& s) {
    std::string out = s;
    for (char& c : out)
        if (!(std::isalnum(static_cast<unsigned char>(c)) != 0)) c = '_';
    return out;
}

}  // namespace

extern "C" {

const char* aaqs_status_name(aaqs_status s) {
    switch (s) {
        case AAQS_OK: return "ok";
        case AAQS_ERR_INVALID_ARGUMENT: return "invalid_argument";
        case AAQS_ERR_DOMAIN: return "domain_error";
        case AAQS_ERR_STATE: return "state_error";
        case AAQS_ERR_IO: return "io_error";
        case AAQS_ERR_INTERNAL: return "internal_error";
    }
    return "unknown";
}

const char* aaqs_last_error_message(void) { return t_last_error.c_str(); }

void aaqs_string_free(char* s) { std::free(s); }

aaqs_status aaqs_generator_create(const char* key, aaqs_generator** out) {
    return guarded([&] {
        require_out(out, "out");
        if (!key) throw std::invalid_argument("key must not be null");
        *out = new aaqs_generator{aaqs::Generator::from_key(key)};
    });
}

void aaqs_generator_destroy(aaqs_generator* gen) { delete gen; }

aaqs_status aaqs_generator_u(const aaqs_generator* gen, double x, double* out) {
    return guarded([&] {
        require_out(gen, "gen");
        require_out(out, "out");
        *out = gen->gen.u(x);
    });
}

aaqs_status aaqs_generator_u_inv(const aaqs_generator* gen, double y, double* out) {
    return guarded([&] {
        require_out(gen, "gen");
        require_out(out, "out");
        *out = gen->gen.u_inv(y);
    });
}

aaqs_status aaqs_generator_quasi_sum(const aaqs_generator* gen, const double* xs, size_t n,
                                     double* value, int* overflow) {
    return guarded([&] {
        require_out(gen, "gen");
        require_out(value, "value");
        require_out(overflow, "overflow");
        if (n > 0 && !xs) throw std::invalid_argument("xs must not be null");
        aaqs::QuasiSumResult r = gen->gen.quasi_sum(std::span<const double>(xs, n));
        *value = r.value;
        *overflow = r.overflow ? 1 : 0;
    });
}

aaqs_status aaqs_generator_fold(const aaqs_generator* gen, double acc, double x, double* value,
                                int* overflow) {
    return guarded([&] {
        require_out(gen, "gen");
        require_out(value, "value");
        require_out(overflow, "overflow");
        aaqs::QuasiSumResult r = gen->gen.fold(acc, x);
        *value = r.value;
        *overflow = r.overflow ? 1 : 0;
    });
}

aaqs_status aaqs_trace_load(const char* path, aaqs_trace** out) {
    return guarded([&] {
        require_out(out, "out");
        if (!path) throw std::invalid_argument("path must not be null");
        *out = new aaqs_trace{aaqs::load_trace_csv(path)};
    });
}

aaqs_status aaqs_trace_save(const aaqs_trace* trace, const char* path) {
    return guarded([&] {
        require_out(trace, "trace");
        if (!path) throw std::invalid_argument("path must not be null");
        aaqs::save_trace_csv(path, trace->trace);
    });
}

void aaqs_trace_destroy(aaqs_trace* trace) { delete trace; }

int aaqs_trace_rounds(const aaqs_trace* trace) {
    return trace ? static_cast<int>(trace->trace.rounds.size()) : -1;
}

int aaqs_trace_num_experts(const aaqs_trace* trace) {
    return trace ? trace->trace.num_experts : -1;
}

int aaqs_trace_num_outcomes(const aaqs_trace* trace) {
    return trace ? trace->trace.num_outcomes : -1;
}

aaqs_status aaqs_trace_learner_loss(const aaqs_trace* trace, int round, double* out) {
    return guarded([&] {
        require_out(trace, "trace");
        require_out(out, "out");
        if (round < 0 || static_cast<std::size_t>(round) >= trace->trace.rounds.size())
            throw std::invalid_argument("round out of range");
        *out = trace->trace.rounds[static_cast<std::size_t>(round)].learner_loss;
    });
}

aaqs_status aaqs_trace_expert_loss(const aaqs_trace* trace, int round, int expert, double* out) {
    return guarded([&] {
        require_out(trace, "trace");
        require_out(out, "out");
        if (round < 0 || static_cast<std::size_t>(round) >= trace->trace.rounds.size())
            throw std::invalid_argument("round out of range");
        if (expert < 0 || expert >= trace->trace.num_experts)
            throw std::invalid_argument("expert out of range");
        *out = trace->trace.rounds[static_cast<std::size_t>(round)]
                   .expert_losses[static_cast<std::size_t>(expert)];
    });
}

aaqs_status aaqs_run_synthetic(const char* config_json, char** out_json) {
    return guarded([&] {
        json cfg = parse_config(config_json);
        aaqs::SyntheticConfig sc;
        sc.gen_key = cfg.value("generator", sc.gen_key);
        sc.eta = cfg.value("eta", sc.eta);
        sc.loss_key = cfg.value("loss", sc.loss_key);
        sc.num_outcomes = cfg.value("outcomes", sc.num_outcomes);
        sc.num_experts = cfg.value("experts", sc.num_experts);
        sc.rounds = cfg.value("rounds", sc.rounds);
        sc.seed = cfg.value("seed", sc.seed);
        sc.grid_resolution = cfg.value("resolution", sc.grid_resolution);
        sc.substitution = cfg.value("substitution", sc.substitution);
        sc.bound_tol = cfg.value("bound_tol", sc.bound_tol);

        aaqs::SyntheticResult res = aaqs::run_synthetic(sc);
        if (cfg.contains("trace_out"))
            aaqs::save_trace_csv(cfg.at("trace_out").get<std::string>(), res.trace);

        json out = {{"apa", aaqs::to_json(res.apa)},
                    {"bound", aaqs::to_json(res.bound)},
                    {"config",
                     {{"eta", aaqs::json_num(sc.eta)},
                      {"experts", sc.num_experts},
                      {"generator", sc.gen_key},
                      {"loss", sc.loss_key},
                      {"outcomes", sc.num_outcomes},
                      {"resolution", sc.grid_resolution},
                      {"rounds", sc.rounds},
                      {"seed", sc.seed}}},
                    {"grid_error", aaqs::json_num(res.grid_error)},
                    {"substitution", res.substitution_used}};
        emit(out_json, out);
    });
}

aaqs_status aaqs_check_bounds(const char* config_json, char** out_json) {
    return guarded([&] {
        json cfg = parse_config(config_json);
        aaqs::GameTrace trace = aaqs::load_trace_csv(jreq_str(cfg, "trace"));
        aaqs::PredictionGameSpec spec;
        spec.profile = aaqs::make_profile(
            aaqs::Generator::from_key(jreq_str(cfg, "generator")), cfg.value("eta", 1.0));
        spec.num_outcomes = trace.num_outcomes;
        spec.num_experts = trace.num_experts;

        json out;
        if (cfg.contains("c")) {
            double c = cfg.at("c").get<double>();
            out["bound"] = aaqs::to_json(
                aaqs::check_nonmixable_bound(trace, spec, c, cfg.value("tol", 1e-6)));
        } else {
            out["bound"] =
                aaqs::to_json(aaqs::check_quasisum_bound(trace, spec, cfg.value("tol", 1e-9)));
        }
        out["apa"] = aaqs::to_json(aaqs::check_apa_identity(trace, spec));
        emit(out_json, out);
    });
}

aaqs_status aaqs_estimate_mixability(const char* config_json, char** out_json) {
    return guarded([&] {
        json cfg = parse_config(config_json);
        aaqs::PredictionGameSpec spec = spec_from(cfg, true);

        aaqs::MixabilityConfig mc;
        int res = cfg.value("resolution", 1000);
        mc.decision_grid = aaqs::DecisionGrid::simplex(spec.num_outcomes, res);
        if (cfg.contains("psi_resolution"))
            mc.psi_grid = aaqs::DecisionGrid::simplex(spec.num_outcomes,
                                                   cfg.at("psi_resolution").get<int>());
        mc.mixture_depth = cfg.value("depth", 2);
        mc.weight_steps = cfg.value("weight_steps", 20);
        mc.refine = cfg.value("refine", true);

        aaqs::MixabilityVerdict v =
            aaqs::is_f_mixable(spec, mc, cfg.value("tol", 1e-6));
        emit(out_json, aaqs::to_json(v));
    });
}

aaqs_status aaqs_check_axioms(const char* config_json, char** out_json) {
    return guarded([&] {
        json cfg = parse_config(config_json);
        aaqs::Generator gen = aaqs::Generator::from_key(jreq_str(cfg, "generator"));
        aaqs::AxiomConfig ac;
        if (cfg.contains("grid")) ac.grid = cfg.at("grid").get<std::vector<double>>();
        ac.random_triples = cfg.value("triples", 0);
        ac.seed = cfg.value("seed", ac.seed);
        emit(out_json, aaqs::to_json(aaqs::check_axioms(gen, ac)));
    });
}

}  // extern "C"

namespace {

struct GameSetup {
    aaqs::GlobalGameConfig cfg;
    aaqs::SubstitutionRule rule;
    std::string environment;
    std::uint64_t seed = 0;
    aaqs::DecisionGrid moves;
    std::string transcript_in;
};

GameSetup game_setup(const json& cfg) {
    GameSetup gs;
    gs.cfg.spec = spec_from(cfg, true);
    gs.cfg.spec.num_experts = cfg.value("experts", 2);
    gs.cfg.rounds = cfg.value("rounds", 50);
    gs.cfg.tol = cfg.value("tol", 1e-9);
    int res = cfg.value("move_resolution", 100);
    gs.moves = aaqs::DecisionGrid::simplex(gs.cfg.spec.num_outcomes, res);
    bool exact = gs.cfg.spec.loss.key() == "log" &&
                 gs.cfg.spec.profile.gen.kind() == aaqs::GenKind::Sum &&
                 gs.cfg.spec.profile.eta <= 1.0;
    gs.rule = exact ? aaqs::SubstitutionRule::logloss_exact()
                    : aaqs::SubstitutionRule::minimax_grid(gs.moves);
    gs.environment = cfg.value("environment", "random");
    gs.seed = cfg.value("seed", std::uint64_t{0});
    if (gs.environment == "replay") gs.transcript_in = jreq_str(cfg, "transcript");
    return gs;
}

std::unique_ptr<aaqs::Environment> make_environment(const GameSetup& gs) {
    if (gs.environment == "random")
        return std::make_unique<aaqs::RandomEnvironment>(gs.seed, gs.moves);
    if (gs.environment == "greedy") return std::make_unique<aaqs::GreedyEnvironment>(gs.moves);
    if (gs.environment == "replay")
        return std::make_unique<aaqs::ReplayEnvironment>(
            aaqs::load_transcript_csv(gs.transcript_in));
    throw std::invalid_argument("environment must be random, greedy, or replay");
}

}  // namespace

extern "C" {

aaqs_status aaqs_play_global_game(const char* config_json, char** out_json) {
    return guarded([&] {
        json cfg = parse_config(config_json);
        GameSetup gs = game_setup(cfg);
        gs.cfg.c = cfg.value("c", 1.0);
        gs.cfg.a = cfg.value("a", 1.0);

        aaqs::AaqsLearner learner(gs.cfg.spec, gs.rule);
        auto env = make_environment(gs);
        aaqs::GlobalGameResult res = aaqs::play_global_game(learner, *env, gs.cfg);

        if (cfg.contains("transcript_out"))
            aaqs::save_transcript_csv(cfg.at("transcript_out").get<std::string>(), res.transcript,
                                      gs.cfg.spec.num_outcomes);
        json out = aaqs::to_json(res);
        out["c"] = aaqs::json_num(gs.cfg.c);
        out["a"] = aaqs::json_num(gs.cfg.a);
        emit(out_json, out);
    });
}

aaqs_status aaqs_frontier_scan(const char* config_json, char** out_json) {
    return guarded([&] {
        json cfg = parse_config(config_json);
        GameSetup gs = game_setup(cfg);
        std::vector<double> c_values = cfg.at("c_values").get<std::vector<double>>();
        std::vector<double> a_values = cfg.at("a_values").get<std::vector<double>>();

        aaqs::FrontierResult res = aaqs::frontier_scan(
            [&] { return std::make_unique<aaqs::AaqsLearner>(gs.cfg.spec, gs.rule); },
            [&] { return make_environment(gs); }, gs.cfg, c_values, a_values);
        emit(out_json, aaqs::to_json(res));
    });
}

aaqs_status aaqs_run_weather(const char* config_json, char** out_json) {
    return guarded([&] {
        json cfg = parse_config(config_json);
        aaqs::WeatherConfig wc;
        wc.station_file = jreq_str(cfg, "station_file");
        wc.precip_mm = cfg.value("precip_mm", wc.precip_mm);
        wc.sunshine_h = cfg.value("sunshine_h", wc.sunshine_h);
        wc.train_fraction = cfg.value("train_fraction", wc.train_fraction);
        wc.grid_steps = cfg.value("grid_steps", wc.grid_steps);
        wc.mix_psi_steps = cfg.value("mix_psi_steps", wc.mix_psi_steps);
        wc.mix_weight_steps = cfg.value("mix_weight_steps", wc.mix_weight_steps);
        wc.laplace_alpha = cfg.value("laplace_alpha", wc.laplace_alpha);
        wc.bound_tol = cfg.value("bound_tol", wc.bound_tol);
        wc.expert_csv = cfg.value("expert_csv", wc.expert_csv);
        if (cfg.contains("runs")) {
            for (const json& r : cfg.at("runs"))
                wc.runs.push_back(
                    {r.at("generator").get<std::string>(), r.value("eta", 1.0)});
        }

        aaqs::WeatherReport report = aaqs::run_weather(wc);
        json out = aaqs::to_json(report);

        if (cfg.contains("out_dir")) {
            std::filesystem::path dir(cfg.at("out_dir").get<std::string>());
            std::error_code ec;
            std::filesystem::create_directories(dir, ec);
            if (ec) throw aaqs::IoError("cannot create out_dir: " + dir.string());
            for (std::size_t i = 0; i < report.runs.size(); ++i) {
                const aaqs::WeatherRunResult& rr = report.runs[i];
                std::string stem = "hist_" + std::to_string(i) + "_" + sanitize(rr.gen_key);
                aaqs::save_histogram_csv((dir / (stem + ".csv")).string(), rr.learner_hist);
                if (cfg.value("write_traces", false))
                    aaqs::save_trace_csv(
                        (dir / ("trace_" + std::to_string(i) + ".csv")).string(), rr.trace);
            }
            for (std::size_t k = 0; k < report.expert_hist.size(); ++k)
                aaqs::save_histogram_csv(
                    (dir / ("expert_hist_" + std::to_string(k) + ".csv")).string(),
                    report.expert_hist[k]);
            aaqs::write_text_file((dir / "summary.json").string(), out.dump(2) + "\n");
        }
        emit(out_json, out);
    });
}

}  // extern "C"
