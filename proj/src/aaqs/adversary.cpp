#include "aaqs/adversary.hpp"

#include <cmath>
#include <stdexcept>

namespace aaqs {

AaqsLearner::AaqsLearner(const PredictionGameSpec& spec, const SubstitutionRule& rule)
    : spec_(spec), ctx_(rule, spec), state_(spec.num_experts) {
    spec_.validate();
}

DecisionVector AaqsLearner::decide(const std::vector<DecisionVector>& experts) const {
    return ctx_.substitute(state_.pseudo_predict(spec_, experts)).decision;
}

void AaqsLearner::observe(const std::vector<DecisionVector>& experts, int outcome) {
    state_.update(spec_, experts, outcome);
}

GlobalGameResult play_global_game(Learner& learner, Environment& env,
                                  const GlobalGameConfig& cfg) {
    cfg.spec.validate();
    if (cfg.rounds < 1) throw std::invalid_argument("global game needs at least 1 round");
    if (std::isnan(cfg.c) || std::isnan(cfg.a))
        throw std::invalid_argument("c and a must be numbers");

    const Generator& gen = cfg.spec.profile.gen;
    const int n = cfg.spec.num_experts;
    const double log_n = std::log(static_cast<double>(n));

    GlobalGameResult res;
    res.expert_aggregate_u.assign(static_cast<std::size_t>(n), 0.0);
    std::vector<double> expert_fold_acc(static_cast<std::size_t>(n), 0.0);
    double learner_fold_acc = 0.0;

    for (int t = 0; t < cfg.rounds; ++t) {
        GlobalGameView view{t, &cfg, res.learner_aggregate_u, res.expert_aggregate_u};
        std::vector<DecisionVector> experts = env.expert_moves(view, learner);
        if (static_cast<int>(experts.size()) != n)
            throw std::invalid_argument("environment produced a wrong number of expert moves");
        for (const auto& d : experts) cfg.spec.validate_decision(d);

        DecisionVector gamma = learner.decide(experts);
        cfg.spec.validate_decision(gamma);

        int w = env.choose_outcome(view, experts, gamma);
        if (w < 0 || w >= cfg.spec.num_outcomes)
            throw std::invalid_argument("environment produced an outcome out of range");

        double lam_l = cfg.spec.loss(w, gamma);
        res.learner_aggregate_u += gen.u(lam_l);
        learner_fold_acc = gen.fold(learner_fold_acc, lam_l).value;
        for (int th = 0; th < n; ++th) {
            double lam = cfg.spec.loss(w, experts[static_cast<std::size_t>(th)]);
            res.expert_aggregate_u[static_cast<std::size_t>(th)] += gen.u(lam);
            expert_fold_acc[static_cast<std::size_t>(th)] =
                gen.fold(expert_fold_acc[static_cast<std::size_t>(th)], lam).value;
        }

        res.transcript.push_back(RoundRecord{experts, gamma, w});
        res.learner_fold.push_back(learner_fold_acc);
        res.expert_fold.push_back(expert_fold_acc);

        if (res.first_violation_round < 0) {
            for (int th = 0; th < n; ++th) {
                double eu = res.expert_aggregate_u[static_cast<std::size_t>(th)];
                double rhs = eu == kInf ? kInf : cfg.c * eu + cfg.a * log_n;
                bool violated = rhs == kInf ? false
                                            : res.learner_aggregate_u > rhs + cfg.tol;
                if (violated) {
                    res.first_violation_round = t;
                    break;
                }
            }
        }

        learner.observe(experts, w);
    }
    res.learner_wins = res.first_violation_round < 0;
    return res;
}

RandomEnvironment::RandomEnvironment(std::uint64_t seed, DecisionGrid moves)
    : rng_(seed), moves_(std::move(moves)) {
    if (moves_.points.empty()) throw std::invalid_argument("move grid must be non-empty");
}

std::vector<DecisionVector> RandomEnvironment::expert_moves(const GlobalGameView& view,
                                                            const Learner&) {
    const int n = view.cfg->spec.num_experts;
    std::vector<DecisionVector> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int th = 0; th < n; ++th) out.push_back(moves_.points[rng_.index(moves_.points.size())]);
    return out;
}

int RandomEnvironment::choose_outcome(const GlobalGameView& view,
                                      const std::vector<DecisionVector>&,
                                      const DecisionVector&) {
    return static_cast<int>(rng_.index(static_cast<std::size_t>(view.cfg->spec.num_outcomes)));
}

GreedyEnvironment::GreedyEnvironment(DecisionGrid moves, int candidates_per_expert) {
    if (moves.points.empty()) throw std::invalid_argument("move grid must be non-empty");
    if (candidates_per_expert < 2) throw std::invalid_argument("need at least 2 candidates");
    const std::size_t G = moves.points.size();
    const std::size_t want = std::min<std::size_t>(static_cast<std::size_t>(candidates_per_expert), G);
    std::size_t prev = G;  // out-of-range sentinel
    for (std::size_t i = 0; i < want; ++i) {
        std::size_t idx = want == 1 ? 0 : i * (G - 1) / (want - 1);
        if (idx != prev) candidates_.push_back(moves.points[idx]);
        prev = idx;
    }
}

double GreedyEnvironment::margin_after(const GlobalGameView& view,
                                       const std::vector<DecisionVector>& experts,
                                       const DecisionVector& learner_decision,
                                       int outcome) const {
    const GlobalGameConfig& cfg = *view.cfg;
    const Generator& gen = cfg.spec.profile.gen;
    const double log_n = std::log(static_cast<double>(cfg.spec.num_experts));
    double ul = view.learner_aggregate_u + gen.u(cfg.spec.loss(outcome, learner_decision));
    double worst = -kInf;
    for (std::size_t th = 0; th < experts.size(); ++th) {
        double ue = view.expert_aggregate_u[th] + gen.u(cfg.spec.loss(outcome, experts[th]));
        double rhs = ue == kInf ? kInf : cfg.c * ue + cfg.a * log_n;
        double margin;
        if (rhs == kInf) margin = -kInf;
        else if (ul == kInf) margin = kInf;
        else margin = ul - rhs;
        worst = std::max(worst, margin);
    }
    return worst;
}

std::vector<DecisionVector> GreedyEnvironment::expert_moves(const GlobalGameView& view,
                                                            const Learner& learner) {
    const int n = view.cfg->spec.num_experts;
    const int m = view.cfg->spec.num_outcomes;
    const std::size_t C = candidates_.size();
    double combos = std::pow(static_cast<double>(C), n);
    if (combos > 200000.0)
        throw std::invalid_argument("greedy environment: joint move space too large");

    std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
    std::vector<DecisionVector> best_moves;
    double best_margin = -kInf;
    while (true) {
        std::vector<DecisionVector> moves;
        moves.reserve(static_cast<std::size_t>(n));
        for (int th = 0; th < n; ++th) moves.push_back(candidates_[idx[static_cast<std::size_t>(th)]]);
        DecisionVector gamma = learner.decide(moves);
        for (int w = 0; w < m; ++w) {
            double margin = margin_after(view, moves, gamma, w);
            if (margin > best_margin || best_moves.empty()) {
                best_margin = margin;
                best_moves = moves;
            }
        }
        // odometer increment, last expert fastest
        int pos = n - 1;
        while (pos >= 0) {
            if (++idx[static_cast<std::size_t>(pos)] < C) break;
            idx[static_cast<std::size_t>(pos)] = 0;
            --pos;
        }
        if (pos < 0) break;
    }
    return best_moves;
}

int GreedyEnvironment::choose_outcome(const GlobalGameView& view,
                                      const std::vector<DecisionVector>& experts,
                                      const DecisionVector& learner_decision) {
    int best_w = 0;
    double best_margin = -kInf;
    for (int w = 0; w < view.cfg->spec.num_outcomes; ++w) {
        double margin = margin_after(view, experts, learner_decision, w);
        if (margin > best_margin) {
            best_margin = margin;
            best_w = w;
        }
    }
    return best_w;
}

ReplayEnvironment::ReplayEnvironment(std::vector<RoundRecord> transcript)
    : transcript_(std::move(transcript)) {}

std::vector<DecisionVector> ReplayEnvironment::expert_moves(const GlobalGameView& view,
                                                            const Learner&) {
    if (static_cast<std::size_t>(view.t) >= transcript_.size())
        throw std::invalid_argument("replay transcript is shorter than the game");
    return transcript_[static_cast<std::size_t>(view.t)].expert_predictions;
}

int ReplayEnvironment::choose_outcome(const GlobalGameView& view,
                                      const std::vector<DecisionVector>&,
                                      const DecisionVector&) {
    return transcript_[static_cast<std::size_t>(view.t)].outcome;
}

FrontierResult frontier_scan(const LearnerFactory& make_learner,
                             const std::function<std::unique_ptr<Environment>()>& make_env,
                             GlobalGameConfig base, std::vector<double> c_values,
                             std::vector<double> a_values) {
    FrontierResult res;
    res.c_values = std::move(c_values);
    res.a_values = std::move(a_values);
    res.learner_wins.assign(res.c_values.size(),
                            std::vector<int>(res.a_values.size(), 0));
    for (std::size_t ci = 0; ci < res.c_values.size(); ++ci) {
        for (std::size_t ai = 0; ai < res.a_values.size(); ++ai) {
            GlobalGameConfig cfg = base;
            cfg.c = res.c_values[ci];
            cfg.a = res.a_values[ai];
            auto learner = make_learner();
            auto env = make_env();
            res.learner_wins[ci][ai] = play_global_game(*learner, *env, cfg).learner_wins ? 1 : 0;
        }
    }
    return res;
}

}  // namespace aaqs
