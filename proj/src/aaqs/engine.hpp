#pragma once

#include <vector>

#include "aaqs/game.hpp"

namespace aaqs {

// Pseudo-prediction kept in the u-domain: u_values[w] = -LSE_w / eta where
// LSE_w = log sum_theta P*(theta) f(lambda(w, xi_theta)). Mapping back through
// u_inv happens only at presentation boundaries, so a quasi-sum run and its
// plain-sum restatement produce bit-identical internals.
struct PseudoPrediction {
    std::vector<double> u_values;
    DecisionVector lambda_values(const Generator& gen) const;
};

// Log-domain expert weights, renormalized after every update so that
// log sum exp(log_w) == 0. An expert with an infinite loss drops to weight
// zero and never recovers.
class ExpertState {
public:
    explicit ExpertState(int num_experts);
    explicit ExpertState(const std::vector<double>& prior);

    int size() const { return static_cast<int>(log_w_.size()); }
    const std::vector<double>& log_weights() const { return log_w_; }
    std::vector<double> weights() const;

    PseudoPrediction pseudo_predict(const PredictionGameSpec& spec,
                                    const std::vector<DecisionVector>& experts) const;
    void update(const PredictionGameSpec& spec, const std::vector<DecisionVector>& experts,
                int outcome);

private:
    std::vector<double> log_w_;
};

struct TraceRound {
    std::vector<DecisionVector> expert_predictions;
    DecisionVector learner_decision;
    int outcome = 0;
    double learner_loss = 0.0;
    std::vector<double> expert_losses;
    std::vector<double> psi_u;  // pseudo-prediction per outcome, u-domain
};

struct GameTrace {
    int num_experts = 0;
    int num_outcomes = 0;
    std::vector<TraceRound> rounds;
};

struct SubstitutionRule;

GameTrace run_game(const PredictionGameSpec& spec,
                   const std::vector<std::vector<DecisionVector>>& expert_stream,
                   const std::vector<int>& outcomes, const SubstitutionRule& rule);

}  // namespace aaqs
