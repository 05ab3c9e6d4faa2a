// Command-line front end. Builds a JSON config per subcommand and hands it
// to the shared library through the C API; everything it prints came back
// through that boundary.
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "aaqs/aaqs.h"

using nlohmann::json;

namespace {

int run_op(aaqs_status (*op)(const char*, char**), const json& cfg) {
    char* out = nullptr;
    aaqs_status st = op(cfg.dump().c_str(), &out);
    if (st != AAQS_OK) {
        std::fprintf(stderr, "error (%s): %s\n", aaqs_status_name(st),
                     aaqs_last_error_message());
        return (st == AAQS_ERR_INVALID_ARGUMENT || st == AAQS_ERR_DOMAIN) ? 2 : 3;
    }
    std::printf("%s\n", out);
    aaqs_string_free(out);
    return 0;
}

// "gen@eta" with eta defaulting to 1; '@' keeps generator keys like pow:3 intact.
json parse_run(const std::string& s) {
    std::string gen = s;
    double eta = 1.0;
    if (auto at = s.rfind('@'); at != std::string::npos) {
        gen = s.substr(0, at);
        try {
            std::size_t used = 0;
            eta = std::stod(s.substr(at + 1), &used);
            if (used != s.size() - at - 1) throw std::invalid_argument(s);
        } catch (const std::exception&) {
            throw CLI::ValidationError("--run", "bad eta in '" + s + "'");
        }
    }
    return json{{"generator", gen}, {"eta", eta}};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Aggregating algorithm for quasi-sum losses"};
    app.require_subcommand(1);

    json cfg;
    aaqs_status (*op)(const char*, char**) = nullptr;

    // Options shared by the game-like subcommands.
    std::string generator = "sum", loss = "log", substitution = "auto";
    double eta = 1.0, c = 1.0, a = 1.0, tol = -1.0;
    int outcomes = 2, experts = 5, rounds = 1000, resolution = 1000;
    std::uint64_t seed = 0;
    std::string trace_out, trace_in, transcript_in, transcript_out, environment = "random";

    auto add_profile = [&](CLI::App* sub) {
        sub->add_option("-g,--generator", generator, "Generator key (sum, sqrt, square, pow10, focal, pow:<p>)");
        sub->add_option("-e,--eta", eta, "Learning rate eta > 0");
    };

    CLI::App* synth = app.add_subcommand("synthetic", "Run a random prediction game and check the regret bound");
    add_profile(synth);
    synth->add_option("-l,--loss", loss, "Loss key (log, brier)");
    synth->add_option("-m,--outcomes", outcomes, "Number of outcomes");
    synth->add_option("-n,--experts", experts, "Number of experts");
    synth->add_option("-T,--rounds", rounds, "Number of rounds");
    synth->add_option("-s,--seed", seed, "RNG seed");
    synth->add_option("-r,--resolution", resolution, "Decision grid resolution");
    synth->add_option("--substitution", substitution, "auto, exact, or minimax");
    synth->add_option("--trace-out", trace_out, "Write the game trace as CSV");

    CLI::App* bounds = app.add_subcommand("bounds-check", "Re-check regret bounds on a saved trace");
    std::string bgen;
    bounds->add_option("--trace", trace_in, "Trace CSV path")->required();
    bounds->add_option("-g,--generator", bgen, "Generator key")->required();
    bounds->add_option("-e,--eta", eta, "Learning rate eta > 0");
    double bc = -1.0;
    bounds->add_option("-c", bc, "Mixability constant (omit for the c = 1 bound)");
    bounds->add_option("--tol", tol, "Slack tolerance");

    CLI::App* mix = app.add_subcommand("mixability", "Estimate the mixability constant c(f)");
    add_profile(mix);
    mix->add_option("-l,--loss", loss, "Loss key (log, brier)");
    mix->add_option("-m,--outcomes", outcomes, "Number of outcomes");
    mix->add_option("-r,--resolution", resolution, "Decision grid resolution");
    int psi_resolution = -1, depth = 2, weight_steps = 20;
    bool no_refine = false;
    mix->add_option("--psi-resolution", psi_resolution, "Pseudo-prediction grid resolution");
    mix->add_option("--depth", depth, "Mixture depth for pseudo-prediction candidates");
    mix->add_option("--weight-steps", weight_steps, "Mixture weight grid steps");
    mix->add_flag("--no-refine", no_refine, "Skip continuous refinement of grid optima");
    mix->add_option("--tol", tol, "Mixability verdict tolerance");

    CLI::App* ax = app.add_subcommand("axioms", "Check the quasi-sum axioms for a generator");
    std::string agen;
    std::vector<double> grid;
    int triples = 0;
    ax->add_option("-g,--generator", agen, "Generator key")->required();
    ax->add_option("--grid", grid, "Explicit evaluation grid");
    ax->add_option("--triples", triples, "Random triples to sample");
    ax->add_option("-s,--seed", seed, "RNG seed");

    CLI::App* game = app.add_subcommand("global-game", "Play the adversarial global game G(c, a)");
    add_profile(game);
    game->add_option("-l,--loss", loss, "Loss key (log, brier)");
    game->add_option("-m,--outcomes", outcomes, "Number of outcomes");
    game->add_option("-n,--experts", experts, "Number of experts");
    game->add_option("-T,--rounds", rounds, "Number of rounds");
    game->add_option("-c", c, "Bound scale c");
    game->add_option("-a", a, "Bound offset a (times ln n)");
    game->add_option("--environment", environment, "random, greedy, or replay");
    game->add_option("-s,--seed", seed, "RNG seed (random environment)");
    int move_resolution = 100;
    game->add_option("--move-resolution", move_resolution, "Environment move grid resolution");
    game->add_option("--transcript", transcript_in, "Transcript CSV to replay");
    game->add_option("--transcript-out", transcript_out, "Write the played transcript as CSV");
    game->add_option("--tol", tol, "Win-condition tolerance");

    CLI::App* front = app.add_subcommand("frontier", "Scan learner wins over a (c, a) grid");
    add_profile(front);
    front->add_option("-l,--loss", loss, "Loss key (log, brier)");
    front->add_option("-m,--outcomes", outcomes, "Number of outcomes");
    front->add_option("-n,--experts", experts, "Number of experts");
    front->add_option("-T,--rounds", rounds, "Number of rounds");
    std::vector<double> c_values, a_values;
    front->add_option("--c-values", c_values, "c grid")->required();
    front->add_option("--a-values", a_values, "a grid")->required();
    front->add_option("--environment", environment, "random or greedy");
    front->add_option("-s,--seed", seed, "RNG seed (random environment)");
    front->add_option("--move-resolution", move_resolution, "Environment move grid resolution");
    front->add_option("--tol", tol, "Win-condition tolerance");

    CLI::App* wx = app.add_subcommand("weather", "Run the weather-classification experiment");
    std::string station_file, out_dir, expert_csv;
    double precip_mm = 2.0, sunshine_h = 4.0, train_fraction = 0.8, laplace_alpha = 1.0;
    int grid_steps = 20, mix_psi_steps = 10, mix_weight_steps = 20;
    bool write_traces = false;
    std::vector<std::string> runs;
    wx->add_option("--station-file", station_file, "DWD daily-climate CSV")->required();
    wx->add_option("--out-dir", out_dir, "Directory for histograms and summary.json");
    wx->add_option("--precip-mm", precip_mm, "Dry-day precipitation threshold (mm)");
    wx->add_option("--sunshine-h", sunshine_h, "Sunny-day sunshine threshold (h)");
    wx->add_option("--train-fraction", train_fraction, "Chronological train split fraction");
    wx->add_option("--grid-steps", grid_steps, "Minimax substitution grid steps");
    wx->add_option("--mix-psi-steps", mix_psi_steps, "Mixability psi grid steps");
    wx->add_option("--mix-weight-steps", mix_weight_steps, "Mixability weight grid steps");
    wx->add_option("--laplace-alpha", laplace_alpha, "Climatology smoothing constant");
    wx->add_option("--expert-csv", expert_csv, "Extra expert predictions CSV");
    wx->add_option("--run", runs, "Config as gen@eta (repeatable; default catalog otherwise)");
    wx->add_flag("--write-traces", write_traces, "Also write per-run trace CSVs");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (synth->parsed()) {
        cfg = {{"generator", generator}, {"eta", eta},       {"loss", loss},
               {"outcomes", outcomes},   {"experts", experts}, {"rounds", rounds},
               {"seed", seed},           {"resolution", resolution},
               {"substitution", substitution}};
        if (!trace_out.empty()) cfg["trace_out"] = trace_out;
        op = aaqs_run_synthetic;
    } else if (bounds->parsed()) {
        cfg = {{"trace", trace_in}, {"generator", bgen}, {"eta", eta}};
        if (bc >= 0.0) cfg["c"] = bc;
        if (tol >= 0.0) cfg["tol"] = tol;
        op = aaqs_check_bounds;
    } else if (mix->parsed()) {
        cfg = {{"generator", generator}, {"eta", eta},   {"loss", loss},
               {"outcomes", outcomes},   {"resolution", resolution},
               {"depth", depth},         {"weight_steps", weight_steps},
               {"refine", !no_refine}};
        if (psi_resolution > 0) cfg["psi_resolution"] = psi_resolution;
        if (tol >= 0.0) cfg["tol"] = tol;
        op = aaqs_estimate_mixability;
    } else if (ax->parsed()) {
        cfg = {{"generator", agen}, {"triples", triples}, {"seed", seed}};
        if (!grid.empty()) cfg["grid"] = grid;
        op = aaqs_check_axioms;
    } else if (game->parsed()) {
        cfg = {{"generator", generator}, {"eta", eta}, {"loss", loss},
               {"outcomes", outcomes},   {"experts", experts},
               {"rounds", rounds},       {"c", c},     {"a", a},
               {"environment", environment}, {"seed", seed},
               {"move_resolution", move_resolution}};
        if (!transcript_in.empty()) cfg["transcript"] = transcript_in;
        if (!transcript_out.empty()) cfg["transcript_out"] = transcript_out;
        if (tol >= 0.0) cfg["tol"] = tol;
        op = aaqs_play_global_game;
    } else if (front->parsed()) {
        cfg = {{"generator", generator}, {"eta", eta}, {"loss", loss},
               {"outcomes", outcomes},   {"experts", experts},
               {"rounds", rounds},       {"c_values", c_values},
               {"a_values", a_values},   {"environment", environment},
               {"seed", seed},           {"move_resolution", move_resolution}};
        if (tol >= 0.0) cfg["tol"] = tol;
        op = aaqs_frontier_scan;
    } else if (wx->parsed()) {
        cfg = {{"station_file", station_file},
               {"precip_mm", precip_mm},
               {"sunshine_h", sunshine_h},
               {"train_fraction", train_fraction},
               {"grid_steps", grid_steps},
               {"mix_psi_steps", mix_psi_steps},
               {"mix_weight_steps", mix_weight_steps},
               {"laplace_alpha", laplace_alpha}};
        if (!out_dir.empty()) cfg["out_dir"] = out_dir;
        if (!expert_csv.empty()) cfg["expert_csv"] = expert_csv;
        if (write_traces) cfg["write_traces"] = true;
        if (!runs.empty()) {
            json jr = json::array();
            try {
                for (const std::string& r : runs) jr.push_back(parse_run(r));
            } catch (const CLI::ParseError& e) {
                app.exit(e);
                return 2;
            }
            cfg["runs"] = jr;
        }
        op = aaqs_run_weather;
    }

    return run_op(op, cfg);
}
