#pragma once

#include <cstdint>
#include <string>

#include "aaqs/bounds.hpp"
#include "aaqs/engine.hpp"
#include "aaqs/substitution.hpp"

namespace aaqs {

struct SyntheticConfig {
    std::string gen_key = "sum";
    double eta = 1.0;
    std::string loss_key = "log";
    int num_outcomes = 2;
    int num_experts = 5;
    int rounds = 1000;
    std::uint64_t seed = 0;
    int grid_resolution = 1000;      // simplex steps; the binary grid for m = 2
    std::string substitution = "auto";  // auto | exact | minimax
    double bound_tol = 1e-9;
};

struct SyntheticResult {
    PredictionGameSpec spec;
    GameTrace trace;
    BoundReport bound;  // quasi-sum bound at c = 1
    ApaReport apa;
    double grid_error = 0.0;  // 0 for the exact substitution
    std::string substitution_used;
};

// Seeded streams: per round, each expert draws a uniform grid index, then the
// outcome is drawn uniformly; one mt19937_64 sequence in that order.
void make_synthetic_streams(std::uint64_t seed, int rounds, int num_experts,
                            const DecisionGrid& grid, int num_outcomes,
                            std::vector<std::vector<DecisionVector>>& experts,
                            std::vector<int>& outcomes);

SyntheticResult run_synthetic(const SyntheticConfig& cfg);

}  // namespace aaqs
