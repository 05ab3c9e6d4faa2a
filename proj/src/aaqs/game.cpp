#include "aaqs/game.hpp"

#include <cmath>
#include <stdexcept>

#include "aaqs/numeric.hpp"

namespace aaqs {

double LossFunction::operator()(int outcome, const DecisionVector& decision) const {
    if (!fn_) throw std::logic_error("loss function not initialized");
    if (outcome < 0 || static_cast<std::size_t>(outcome) >= decision.size())
        throw std::invalid_argument("outcome index out of range");
    return fn_(outcome, decision);
}

LossFunction LossFunction::from_key(const std::string& key) {
    LossFunction lf;
    lf.key_ = key;
    if (key == "log") {
        lf.fn_ = [](int w, const DecisionVector& d) {
            double p = d[static_cast<std::size_t>(w)];
            if (p < kLogLossFloor) return kInf;
            return -std::log(p);
        };
    } else if (key == "brier") {
        lf.fn_ = [](int w, const DecisionVector& d) {
            double s = 0.0;
            for (std::size_t o = 0; o < d.size(); ++o) {
                double diff = d[o] - (static_cast<int>(o) == w ? 1.0 : 0.0);
                s += diff * diff;
            }
            return s;
        };
    } else {
        throw std::invalid_argument("unknown loss key: " + key);
    }
    return lf;
}

LossFunction LossFunction::composed(const Generator& gen, const LossFunction& base) {
    if (!base.valid()) throw std::invalid_argument("composed: base loss not initialized");
    LossFunction lf;
    lf.key_ = "composed:" + gen.key() + ":" + base.key();
    lf.fn_ = [gen, base](int w, const DecisionVector& d) { return gen.u(base(w, d)); };
    return lf;
}

namespace {

void emit_compositions(int remaining, int parts, int steps, DecisionVector& prefix,
                       std::vector<DecisionVector>& out) {
    if (parts == 1) {
        if (remaining < 1) return;
        prefix.push_back(static_cast<double>(remaining) / steps);
        out.push_back(prefix);
        prefix.pop_back();
        return;
    }
    for (int a = 1; a <= remaining - (parts - 1); ++a) {
        prefix.push_back(static_cast<double>(a) / steps);
        emit_compositions(remaining - a, parts - 1, steps, prefix, out);
        prefix.pop_back();
    }
}

}  // namespace

DecisionGrid DecisionGrid::simplex(int num_outcomes, int steps) {
    if (num_outcomes < 2) throw std::invalid_argument("simplex grid needs at least 2 outcomes");
    if (steps < num_outcomes)
        throw std::invalid_argument("simplex grid needs steps >= num_outcomes");
    DecisionGrid g;
    DecisionVector prefix;
    emit_compositions(steps, num_outcomes, steps, prefix, g.points);
    return g;
}

DecisionGrid DecisionGrid::binary(int resolution) { return simplex(2, resolution); }

void PredictionGameSpec::validate() const {
    if (num_outcomes < 2) throw std::invalid_argument("need at least 2 outcomes");
    if (num_experts < 1) throw std::invalid_argument("need at least 1 expert");
    if (!loss.valid()) throw std::invalid_argument("loss not set");
    if (!std::isfinite(profile.eta) || profile.eta <= 0.0)
        throw std::invalid_argument("eta must be finite and positive");
}

void PredictionGameSpec::validate_decision(const DecisionVector& d) const {
    if (static_cast<int>(d.size()) != num_outcomes)
        throw std::invalid_argument("decision length does not match the outcome alphabet");
    double s = 0.0;
    for (double p : d) {
        if (std::isnan(p) || p < 0.0 || p > 1.0 + 1e-9)
            throw std::invalid_argument("decision entries must lie in [0, 1]");
        s += p;
    }
    if (std::fabs(s - 1.0) > 1e-9)
        throw std::invalid_argument("decision must sum to 1");
}

}  // namespace aaqs
