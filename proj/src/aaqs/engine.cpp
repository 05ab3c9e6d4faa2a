#include "aaqs/engine.hpp"

#include <cmath>
#include <stdexcept>

#include "aaqs/numeric.hpp"
#include "aaqs/substitution.hpp"

namespace aaqs {

DecisionVector PseudoPrediction::lambda_values(const Generator& gen) const {
    DecisionVector out(u_values.size());
    for (std::size_t i = 0; i < u_values.size(); ++i) out[i] = gen.u_inv(u_values[i]);
    return out;
}

ExpertState::ExpertState(int num_experts) {
    if (num_experts < 1) throw std::invalid_argument("need at least 1 expert");
    log_w_.assign(static_cast<std::size_t>(num_experts),
                  -std::log(static_cast<double>(num_experts)));
    double lse = log_sum_exp(log_w_);
    for (double& lw : log_w_) lw -= lse;
}

ExpertState::ExpertState(const std::vector<double>& prior) {
    if (prior.empty()) throw std::invalid_argument("prior must be non-empty");
    double s = 0.0;
    for (double p : prior) {
        if (std::isnan(p) || p < 0.0) throw std::invalid_argument("prior entries must be >= 0");
        s += p;
    }
    if (std::fabs(s - 1.0) > 1e-9) throw std::invalid_argument("prior must sum to 1");
    log_w_.resize(prior.size());
    for (std::size_t i = 0; i < prior.size(); ++i)
        log_w_[i] = prior[i] > 0.0 ? std::log(prior[i]) : -kInf;
    double lse = log_sum_exp(log_w_);
    if (lse == -kInf) throw std::invalid_argument("prior must have positive mass");
    for (double& lw : log_w_) lw -= lse;
}

std::vector<double> ExpertState::weights() const {
    std::vector<double> w(log_w_.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::exp(log_w_[i]);
    return w;
}

PseudoPrediction ExpertState::pseudo_predict(const PredictionGameSpec& spec,
                                             const std::vector<DecisionVector>& experts) const {
    if (static_cast<int>(experts.size()) != size())
        throw std::invalid_argument("expert prediction count does not match state");
    PseudoPrediction psi;
    psi.u_values.resize(static_cast<std::size_t>(spec.num_outcomes));
    std::vector<double> terms(log_w_.size());
    for (int w = 0; w < spec.num_outcomes; ++w) {
        for (std::size_t th = 0; th < log_w_.size(); ++th) {
            terms[th] = log_w_[th] == -kInf
                            ? -kInf
                            : log_w_[th] + spec.profile.log_f(spec.loss(w, experts[th]));
        }
        psi.u_values[static_cast<std::size_t>(w)] =
            spec.profile.u_of_g_from_log(log_sum_exp(terms));
    }
    return psi;
}

void ExpertState::update(const PredictionGameSpec& spec,
                         const std::vector<DecisionVector>& experts, int outcome) {
    if (static_cast<int>(experts.size()) != size())
        throw std::invalid_argument("expert prediction count does not match state");
    for (std::size_t th = 0; th < log_w_.size(); ++th) {
        if (log_w_[th] == -kInf) continue;
        log_w_[th] += spec.profile.log_f(spec.loss(outcome, experts[th]));
    }
    double lse = log_sum_exp(log_w_);
    if (lse == -kInf) throw std::runtime_error("all experts eliminated by infinite loss");
    for (double& lw : log_w_) {
        if (lw != -kInf) lw -= lse;
    }
}

GameTrace run_game(const PredictionGameSpec& spec,
                   const std::vector<std::vector<DecisionVector>>& expert_stream,
                   const std::vector<int>& outcomes, const SubstitutionRule& rule) {
    spec.validate();
    if (expert_stream.size() != outcomes.size())
        throw std::invalid_argument("expert stream and outcome stream lengths differ");

    SubstitutionContext ctx(rule, spec);
    ExpertState state(spec.num_experts);

    GameTrace trace;
    trace.num_experts = spec.num_experts;
    trace.num_outcomes = spec.num_outcomes;
    trace.rounds.reserve(outcomes.size());

    for (std::size_t t = 0; t < outcomes.size(); ++t) {
        const auto& experts = expert_stream[t];
        if (static_cast<int>(experts.size()) != spec.num_experts)
            throw std::invalid_argument("wrong number of expert predictions in round");
        for (const auto& d : experts) spec.validate_decision(d);
        int w = outcomes[t];
        if (w < 0 || w >= spec.num_outcomes)
            throw std::invalid_argument("outcome out of range in round");

        TraceRound round;
        round.expert_predictions = experts;
        round.outcome = w;

        PseudoPrediction psi = state.pseudo_predict(spec, experts);
        round.psi_u = psi.u_values;
        round.learner_decision = ctx.substitute(psi).decision;
        round.learner_loss = spec.loss(w, round.learner_decision);
        round.expert_losses.resize(experts.size());
        for (std::size_t th = 0; th < experts.size(); ++th)
            round.expert_losses[th] = spec.loss(w, experts[th]);

        state.update(spec, experts, w);
        trace.rounds.push_back(std::move(round));
    }
    return trace;
}

}  // namespace aaqs
