#include "aaqs/bounds.hpp"

#include <cmath>
#include <stdexcept>

#include "aaqs/numeric.hpp"

namespace aaqs {

namespace {

double learner_aggregate_u(const GameTrace& trace, const Generator& gen) {
    std::vector<double> us;
    us.reserve(trace.rounds.size());
    for (const auto& r : trace.rounds) us.push_back(gen.u(r.learner_loss));
    return kahan_sum(us);
}

std::vector<double> expert_aggregates_u(const GameTrace& trace, const Generator& gen) {
    std::vector<double> out(static_cast<std::size_t>(trace.num_experts));
    std::vector<double> us(trace.rounds.size());
    for (int th = 0; th < trace.num_experts; ++th) {
        for (std::size_t t = 0; t < trace.rounds.size(); ++t)
            us[t] = gen.u(trace.rounds[t].expert_losses[static_cast<std::size_t>(th)]);
        out[static_cast<std::size_t>(th)] = kahan_sum(us);
    }
    return out;
}

double slack_for(double lhs, double rhs) {
    if (rhs == kInf) return kInf;
    if (lhs == kInf) return -kInf;
    return rhs - lhs;
}

BoundReport check_bound_impl(const GameTrace& trace, const PredictionGameSpec& spec, double c,
                             double tol) {
    if (trace.num_experts < 1) throw std::invalid_argument("trace has no experts");
    if (!(c > 0.0) || !std::isfinite(c)) throw std::invalid_argument("c must be finite and > 0");

    BoundReport rep;
    rep.c = c;
    rep.tolerance = tol;
    rep.margin_u = (c / spec.profile.eta) * std::log(static_cast<double>(trace.num_experts));
    rep.learner_aggregate_u = learner_aggregate_u(trace, spec.profile.gen);
    rep.expert_aggregate_u = expert_aggregates_u(trace, spec.profile.gen);

    rep.slack_u.resize(rep.expert_aggregate_u.size());
    rep.min_slack = kInf;
    for (std::size_t th = 0; th < rep.expert_aggregate_u.size(); ++th) {
        double rhs = rep.expert_aggregate_u[th] == kInf ? kInf
                                                        : c * rep.expert_aggregate_u[th] +
                                                              rep.margin_u;
        rep.slack_u[th] = slack_for(rep.learner_aggregate_u, rhs);
        if (rep.slack_u[th] < rep.min_slack) {
            rep.min_slack = rep.slack_u[th];
            rep.argmin_expert = static_cast<int>(th);
        }
    }
    if (rep.argmin_expert < 0) rep.argmin_expert = 0;  // all slacks +inf
    rep.satisfied = rep.min_slack >= -tol;
    return rep;
}

}  // namespace

BoundReport check_quasisum_bound(const GameTrace& trace, const PredictionGameSpec& spec,
                                 double tol) {
    return check_bound_impl(trace, spec, 1.0, tol);
}

BoundReport check_nonmixable_bound(const GameTrace& trace, const PredictionGameSpec& spec,
                                   double c, double tol) {
    return check_bound_impl(trace, spec, c, tol);
}

ApaReport check_apa_identity(const GameTrace& trace, const PredictionGameSpec& spec, double tol,
                             const std::vector<double>& prior) {
    const int n = trace.num_experts;
    if (n < 1) throw std::invalid_argument("trace has no experts");
    std::vector<double> log_prior(static_cast<std::size_t>(n),
                                  -std::log(static_cast<double>(n)));
    if (!prior.empty()) {
        if (static_cast<int>(prior.size()) != n)
            throw std::invalid_argument("prior size does not match expert count");
        double s = 0.0;
        for (double p : prior) {
            if (std::isnan(p) || p < 0.0) throw std::invalid_argument("prior entries must be >= 0");
            s += p;
        }
        if (std::fabs(s - 1.0) > 1e-9) throw std::invalid_argument("prior must sum to 1");
        for (std::size_t i = 0; i < prior.size(); ++i)
            log_prior[i] = prior[i] > 0.0 ? std::log(prior[i]) : -kInf;
    }

    ApaReport rep;
    rep.tolerance = tol;
    const double eta = spec.profile.eta;
    rep.bound_margin_u = std::log(static_cast<double>(n)) / eta;

    std::vector<double> psi_terms;
    psi_terms.reserve(trace.rounds.size());
    for (const auto& r : trace.rounds) {
        if (static_cast<int>(r.psi_u.size()) != trace.num_outcomes)
            throw std::invalid_argument("trace round lacks pseudo-prediction values");
        psi_terms.push_back(r.psi_u[static_cast<std::size_t>(r.outcome)]);
    }
    rep.pseudo_aggregate_u = kahan_sum(psi_terms);

    std::vector<double> experts_u = expert_aggregates_u(trace, spec.profile.gen);
    std::vector<double> terms(experts_u.size());
    for (std::size_t th = 0; th < experts_u.size(); ++th)
        terms[th] = experts_u[th] == kInf ? -kInf : log_prior[th] - eta * experts_u[th];
    double lse = log_sum_exp(terms);
    rep.batch_rhs_u = lse == -kInf ? kInf : -lse / eta;

    if (rep.pseudo_aggregate_u == kInf || rep.batch_rhs_u == kInf) {
        bool both = rep.pseudo_aggregate_u == kInf && rep.batch_rhs_u == kInf;
        rep.residual = both ? 0.0 : (rep.pseudo_aggregate_u == kInf ? kInf : -kInf);
        rep.identity_ok = both;
    } else {
        rep.residual = rep.pseudo_aggregate_u - rep.batch_rhs_u;
        rep.identity_ok = std::fabs(rep.residual) <= tol;
    }

    rep.min_expert_slack = kInf;
    for (std::size_t th = 0; th < experts_u.size(); ++th) {
        double prior_margin = log_prior[th] == -kInf ? kInf : -log_prior[th] / eta;
        double rhs = experts_u[th] == kInf || prior_margin == kInf
                         ? kInf
                         : experts_u[th] + prior_margin;
        rep.min_expert_slack =
            std::min(rep.min_expert_slack, slack_for(rep.pseudo_aggregate_u, rhs));
    }
    rep.bound_ok = rep.min_expert_slack >= -tol;
    return rep;
}

}  // namespace aaqs
