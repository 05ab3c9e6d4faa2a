#pragma once

#include <cstdint>
#include <vector>

#include "aaqs/engine.hpp"
#include "aaqs/game.hpp"

namespace aaqs {

enum class SubstitutionKind { LoglossExact, MinimaxGrid };

struct SubstitutionRule {
    SubstitutionKind kind = SubstitutionKind::MinimaxGrid;
    DecisionGrid grid;  // search space for MinimaxGrid

    // gamma_w proportional to exp(-psi(w)); valid only for the log loss under
    // the sum generator with eta <= 1, where the pseudo-prediction is a
    // superprediction and the closed form dominates it exactly.
    static SubstitutionRule logloss_exact();
    static SubstitutionRule minimax_grid(DecisionGrid g);
};

struct SubstitutionResult {
    DecisionVector decision;
    double achieved_ratio = 0.0;  // max over outcomes of u(lambda)/u(psi)
    std::size_t grid_index = 0;   // meaningful for MinimaxGrid only
};

// Precomputes the u-domain loss table over the search grid once, then each
// substitute() call is a pure table scan.
class SubstitutionContext {
public:
    SubstitutionContext(const SubstitutionRule& rule, const PredictionGameSpec& spec);

    SubstitutionResult substitute(const PseudoPrediction& psi) const;

    // Largest u-domain gap between consecutive grid entries, the resolution
    // limit of grid-based answers.
    double grid_error() const { return grid_error_; }
    const std::vector<std::vector<double>>& u_table() const { return u_table_; }

private:
    SubstitutionRule rule_;
    PredictionGameSpec spec_;
    std::vector<std::vector<double>> u_table_;  // [grid point][outcome]
    double grid_error_ = 0.0;
};

SubstitutionResult substitute(const SubstitutionRule& rule, const PredictionGameSpec& spec,
                              const PseudoPrediction& psi);

double substitution_grid_error(const PredictionGameSpec& spec, const DecisionGrid& grid);

// Candidate pseudo-predictions are f-mixtures of grid decisions: singletons
// and, at depth 2, weighted pairs. c_hat is the worst over candidates of the
// best achievable ratio sup_w u(lambda(w, gamma)) / u(psi(w)); for binary
// games the inner minimum over gamma is refined off-grid by bisecting the
// crossing of the two ratio curves, because the grid optimum alone
// overestimates c for mixable games.
struct MixabilityConfig {
    DecisionGrid decision_grid;
    DecisionGrid psi_grid;  // empty means: use decision_grid
    int mixture_depth = 2;
    int weight_steps = 20;
    bool refine = true;  // continuous inner refinement, binary games only
};

struct MixabilityEstimate {
    double c_hat = 0.0;
    double grid_error = 0.0;
    bool refined = false;
    long long candidates = 0;
    long long refinements = 0;
};

MixabilityEstimate estimate_c(const PredictionGameSpec& spec, const MixabilityConfig& cfg);

// Mixability verdict with a cross-check: the same game restated as a
// plain-sum game over u(lambda) must give the same estimate.
struct MixabilityVerdict {
    MixabilityEstimate direct;
    MixabilityEstimate restated;
    bool mixable = false;
    double tol = 0.0;
};

MixabilityVerdict is_f_mixable(const PredictionGameSpec& spec, const MixabilityConfig& cfg,
                               double tol);

}  // namespace aaqs
