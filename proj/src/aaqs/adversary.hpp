#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "aaqs/engine.hpp"
#include "aaqs/numeric.hpp"
#include "aaqs/substitution.hpp"

namespace aaqs {

class Learner {
public:
    virtual ~Learner() = default;
    virtual DecisionVector decide(const std::vector<DecisionVector>& experts) const = 0;
    virtual void observe(const std::vector<DecisionVector>& experts, int outcome) = 0;
};

// The aggregating learner: pseudo-predict from the current weights, apply the
// substitution rule, update weights on the revealed outcome.
class AaqsLearner final : public Learner {
public:
    AaqsLearner(const PredictionGameSpec& spec, const SubstitutionRule& rule);
    DecisionVector decide(const std::vector<DecisionVector>& experts) const override;
    void observe(const std::vector<DecisionVector>& experts, int outcome) override;

private:
    PredictionGameSpec spec_;
    SubstitutionContext ctx_;
    ExpertState state_;
};

using LearnerFactory = std::function<std::unique_ptr<Learner>()>;

struct GlobalGameConfig {
    PredictionGameSpec spec;  // profile drives the learner and the aggregation
    double c = 1.0;           // multiplier on the expert aggregate
    double a = 0.0;           // coefficient on ln n
    int rounds = 0;
    double tol = 1e-9;
};

struct GlobalGameView {
    int t = 0;
    const GlobalGameConfig* cfg = nullptr;
    double learner_aggregate_u = 0.0;
    std::span<const double> expert_aggregate_u;
};

class Environment {
public:
    virtual ~Environment() = default;
    virtual std::vector<DecisionVector> expert_moves(const GlobalGameView& view,
                                                     const Learner& learner) = 0;
    virtual int choose_outcome(const GlobalGameView& view,
                               const std::vector<DecisionVector>& experts,
                               const DecisionVector& learner_decision) = 0;
};

struct RoundRecord {
    std::vector<DecisionVector> expert_predictions;
    DecisionVector learner_decision;
    int outcome = 0;
};

struct GlobalGameResult {
    bool learner_wins = true;
    int first_violation_round = -1;  // 0-based, -1 when the learner never trails
    std::vector<RoundRecord> transcript;
    std::vector<double> learner_fold;              // folded lambda-domain aggregate per round
    std::vector<std::vector<double>> expert_fold;  // [round][expert]
    double learner_aggregate_u = 0.0;
    std::vector<double> expert_aggregate_u;
};

// Learner wins iff at every round t and for every expert theta:
// u(A_t(learner)) <= c u(A_t(theta)) + a ln n + tol. Aggregates for the check
// are the exact u-domain sums; the folded lambda-domain values are recorded
// alongside and agree with them up to rounding.
GlobalGameResult play_global_game(Learner& learner, Environment& env,
                                  const GlobalGameConfig& cfg);

// Experts and outcomes drawn uniformly from a move grid; the sequence depends
// only on the seed, never on (c, a) or the learner, so frontier scans over a
// fixed seed share one transcript.
class RandomEnvironment final : public Environment {
public:
    RandomEnvironment(std::uint64_t seed, DecisionGrid moves);
    std::vector<DecisionVector> expert_moves(const GlobalGameView& view,
                                             const Learner& learner) override;
    int choose_outcome(const GlobalGameView& view, const std::vector<DecisionVector>& experts,
                       const DecisionVector& learner_decision) override;

private:
    Rng rng_;
    DecisionGrid moves_;
};

// Depth-1 adversary: enumerates joint expert moves over a small candidate
// set, simulates the learner's reply for each, and picks the (moves, outcome)
// pair that maximizes the violation margin of the win condition.
class GreedyEnvironment final : public Environment {
public:
    explicit GreedyEnvironment(DecisionGrid moves, int candidates_per_expert = 21);
    std::vector<DecisionVector> expert_moves(const GlobalGameView& view,
                                             const Learner& learner) override;
    int choose_outcome(const GlobalGameView& view, const std::vector<DecisionVector>& experts,
                       const DecisionVector& learner_decision) override;

private:
    double margin_after(const GlobalGameView& view, const std::vector<DecisionVector>& experts,
                        const DecisionVector& learner_decision, int outcome) const;

    std::vector<DecisionVector> candidates_;
};

// Replays recorded nature moves; the learner's recorded decisions are ignored.
class ReplayEnvironment final : public Environment {
public:
    explicit ReplayEnvironment(std::vector<RoundRecord> transcript);
    std::vector<DecisionVector> expert_moves(const GlobalGameView& view,
                                             const Learner& learner) override;
    int choose_outcome(const GlobalGameView& view, const std::vector<DecisionVector>& experts,
                       const DecisionVector& learner_decision) override;

private:
    std::vector<RoundRecord> transcript_;
};

struct FrontierResult {
    std::vector<double> c_values;
    std::vector<double> a_values;
    std::vector<std::vector<int>> learner_wins;  // [c index][a index], 0 or 1
};

FrontierResult frontier_scan(const LearnerFactory& make_learner,
                             const std::function<std::unique_ptr<Environment>()>& make_env,
                             GlobalGameConfig base, std::vector<double> c_values,
                             std::vector<double> a_values);

}  // namespace aaqs
