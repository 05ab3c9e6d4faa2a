#include "aaqs/synthetic.hpp"

#include <stdexcept>

#include "aaqs/numeric.hpp"

namespace aaqs {

void make_synthetic_streams(std::uint64_t seed, int rounds, int num_experts,
                            const DecisionGrid& grid, int num_outcomes,
                            std::vector<std::vector<DecisionVector>>& experts,
                            std::vector<int>& outcomes) {
    if (rounds < 1 || num_experts < 1) throw std::invalid_argument("bad stream dimensions");
    if (grid.points.empty()) throw std::invalid_argument("empty decision grid");
    Rng rng(seed);
    experts.assign(static_cast<std::size_t>(rounds), {});
    outcomes.assign(static_cast<std::size_t>(rounds), 0);
    for (int t = 0; t < rounds; ++t) {
        auto& row = experts[static_cast<std::size_t>(t)];
        row.reserve(static_cast<std::size_t>(num_experts));
        for (int th = 0; th < num_experts; ++th)
            row.push_back(grid.points[rng.index(grid.points.size())]);
        outcomes[static_cast<std::size_t>(t)] =
            static_cast<int>(rng.index(static_cast<std::size_t>(num_outcomes)));
    }
}

SyntheticResult run_synthetic(const SyntheticConfig& cfg) {
    SyntheticResult res;
    res.spec.profile = make_profile(Generator::from_key(cfg.gen_key), cfg.eta);
    res.spec.loss = LossFunction::from_key(cfg.loss_key);
    res.spec.num_outcomes = cfg.num_outcomes;
    res.spec.num_experts = cfg.num_experts;
    res.spec.validate();

    DecisionGrid grid = DecisionGrid::simplex(cfg.num_outcomes, cfg.grid_resolution);

    bool exact;
    if (cfg.substitution == "auto") {
        exact = cfg.loss_key == "log" && res.spec.profile.gen.kind() == GenKind::Sum &&
                cfg.eta <= 1.0;
    } else if (cfg.substitution == "exact") {
        exact = true;
    } else if (cfg.substitution == "minimax") {
        exact = false;
    } else {
        throw std::invalid_argument("substitution must be auto, exact, or minimax");
    }
    SubstitutionRule rule =
        exact ? SubstitutionRule::logloss_exact() : SubstitutionRule::minimax_grid(grid);
    res.substitution_used = exact ? "logloss_exact" : "minimax_grid";

    std::vector<std::vector<DecisionVector>> experts;
    std::vector<int> outcomes;
    make_synthetic_streams(cfg.seed, cfg.rounds, cfg.num_experts, grid, cfg.num_outcomes,
                           experts, outcomes);

    res.trace = run_game(res.spec, experts, outcomes, rule);
    res.bound = check_quasisum_bound(res.trace, res.spec, cfg.bound_tol);
    res.apa = check_apa_identity(res.trace, res.spec);
    res.grid_error = exact ? 0.0 : substitution_grid_error(res.spec, grid);
    return res;
}

}  // namespace aaqs
