#pragma once

#include <functional>
#include <string>
#include <vector>

#include "aaqs/aggregation.hpp"

namespace aaqs {

using DecisionVector = std::vector<double>;

// Loss lambda(outcome, decision) >= 0. Decisions are probability vectors over
// the outcome alphabet for both built-in losses.
class LossFunction {
public:
    LossFunction() = default;
    static LossFunction from_key(const std::string& key);  // "log" or "brier"
    // u composed with a base loss; used to restate a quasi-sum game as a
    // plain-sum game over the transformed loss.
    static LossFunction composed(const Generator& gen, const LossFunction& base);

    const std::string& key() const { return key_; }
    bool valid() const { return static_cast<bool>(fn_); }
    double operator()(int outcome, const DecisionVector& decision) const;

private:
    std::string key_;
    std::function<double(int, const DecisionVector&)> fn_;
};

// Probabilities below this floor count as zero for the log loss.
inline constexpr double kLogLossFloor = 1e-300;

struct DecisionGrid {
    std::vector<DecisionVector> points;

    // Interior simplex grid: all compositions (a_1,...,a_m) of `steps` into m
    // positive integers, decision a_i/steps, enumerated lexicographically with
    // a_1 slowest. Endpoints of the simplex are excluded.
    static DecisionGrid simplex(int num_outcomes, int steps);
    // Binary shorthand: points ((k/R, 1-k/R)) for k = 1..R-1 in ascending k.
    static DecisionGrid binary(int resolution);
};

struct PredictionGameSpec {
    WeightingProfile profile;
    LossFunction loss;
    int num_outcomes = 2;
    int num_experts = 0;

    void validate() const;
    void validate_decision(const DecisionVector& d) const;
};

}  // namespace aaqs
