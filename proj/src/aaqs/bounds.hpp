#pragma once

#include <vector>

#include "aaqs/engine.hpp"

namespace aaqs {

// All comparisons live in the u-domain: aggregates are sums of u(lambda), and
// slack is rhs - lhs with the conventions that an infinite rhs gives +inf
// slack (the bound is vacuous) and an infinite lhs against a finite rhs gives
// -inf.
struct BoundReport {
    double learner_aggregate_u = 0.0;
    std::vector<double> expert_aggregate_u;
    std::vector<double> slack_u;
    double min_slack = 0.0;
    int argmin_expert = -1;
    double c = 1.0;
    double margin_u = 0.0;  // (c / eta) ln n
    double tolerance = 0.0;
    bool satisfied = false;
};

// u(Q(learner)) <= u(Q(expert)) + ln(n)/eta for every expert. With the sum
// generator this is the classic additive-regret bound.
BoundReport check_quasisum_bound(const GameTrace& trace, const PredictionGameSpec& spec,
                                 double tol = 1e-9);

// u(Q(learner)) <= c u(Q(expert)) + (c / eta) ln n, for games that are not
// (f, eta)-mixable; c normally comes from the mixability estimator.
BoundReport check_nonmixable_bound(const GameTrace& trace, const PredictionGameSpec& spec,
                                   double c, double tol = 1e-6);

struct ApaReport {
    double pseudo_aggregate_u = 0.0;  // sum_t u(psi_t(w_t))
    double batch_rhs_u = 0.0;         // -(1/eta) ln sum_theta P0 exp(-eta U_theta)
    double residual = 0.0;            // lhs - rhs, 0 when both are infinite
    bool identity_ok = false;
    double bound_margin_u = 0.0;  // ln(n)/eta, the uniform-prior margin
    double min_expert_slack = 0.0;
    bool bound_ok = false;
    double tolerance = 0.0;
};

// The per-round pseudo-losses telescope into the prior-smoothed batch
// expression exactly; checked first as an identity, then as the
// ln(1/P0)/eta bound against each expert.
ApaReport check_apa_identity(const GameTrace& trace, const PredictionGameSpec& spec,
                             double tol = 1e-9, const std::vector<double>& prior = {});

}  // namespace aaqs
