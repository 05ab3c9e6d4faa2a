#include "aaqs/substitution.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "aaqs/numeric.hpp"

namespace aaqs {

namespace {

// Ratio convention: a zero pseudo-prediction is matched only by zero loss; an
// infinite pseudo-prediction is dominated by anything.
double sup_ratio(double a, double b) {
    if (b == 0.0) return a == 0.0 ? 0.0 : kInf;
    if (b == kInf) return 0.0;
    return a / b;
}

}  // namespace

SubstitutionRule SubstitutionRule::logloss_exact() {
    SubstitutionRule r;
    r.kind = SubstitutionKind::LoglossExact;
    return r;
}

SubstitutionRule SubstitutionRule::minimax_grid(DecisionGrid g) {
    SubstitutionRule r;
    r.kind = SubstitutionKind::MinimaxGrid;
    r.grid = std::move(g);
    return r;
}

SubstitutionContext::SubstitutionContext(const SubstitutionRule& rule,
                                         const PredictionGameSpec& spec)
    : rule_(rule), spec_(spec) {
    if (rule_.kind == SubstitutionKind::LoglossExact) {
        if (spec_.loss.key() != "log" || spec_.profile.gen.kind() != GenKind::Sum ||
            spec_.profile.eta > 1.0 + 1e-12)
            throw std::invalid_argument(
                "logloss_exact needs the log loss, the sum generator, and eta <= 1");
        return;
    }
    if (rule_.grid.points.empty())
        throw std::invalid_argument("minimax substitution needs a non-empty grid");
    u_table_.resize(rule_.grid.points.size());
    for (std::size_t i = 0; i < rule_.grid.points.size(); ++i) {
        const DecisionVector& d = rule_.grid.points[i];
        spec_.validate_decision(d);
        auto& row = u_table_[i];
        row.resize(static_cast<std::size_t>(spec_.num_outcomes));
        for (int w = 0; w < spec_.num_outcomes; ++w)
            row[static_cast<std::size_t>(w)] = spec_.profile.gen.u(spec_.loss(w, d));
    }
    for (std::size_t i = 0; i + 1 < u_table_.size(); ++i) {
        for (int w = 0; w < spec_.num_outcomes; ++w) {
            double a = u_table_[i][static_cast<std::size_t>(w)];
            double b = u_table_[i + 1][static_cast<std::size_t>(w)];
            if (a == kInf && b == kInf) continue;
            grid_error_ = std::max(grid_error_, std::fabs(b - a));
        }
    }
}

SubstitutionResult SubstitutionContext::substitute(const PseudoPrediction& psi) const {
    if (static_cast<int>(psi.u_values.size()) != spec_.num_outcomes)
        throw std::invalid_argument("pseudo-prediction length mismatch");

    SubstitutionResult res;
    if (rule_.kind == SubstitutionKind::LoglossExact) {
        // gamma_w = exp(-psi(w)) summed to s <= 1; dividing by s only shrinks
        // losses, so the result still dominates psi.
        DecisionVector d(psi.u_values.size());
        double s = 0.0;
        for (std::size_t w = 0; w < d.size(); ++w) {
            d[w] = std::exp(-psi.u_values[w]);
            s += d[w];
        }
        if (s <= 0.0) throw std::runtime_error("pseudo-prediction has no finite component");
        if (s > 1.0 + 1e-9)
            throw std::runtime_error("pseudo-prediction is not a superprediction");
        for (double& p : d) p /= s;
        double worst = 0.0;
        for (std::size_t w = 0; w < d.size(); ++w) {
            double lam = spec_.loss(static_cast<int>(w), d);
            worst = std::max(worst, sup_ratio(lam, psi.u_values[w]));
        }
        res.decision = std::move(d);
        res.achieved_ratio = worst;
        return res;
    }

    double best = kInf;
    std::size_t best_i = 0;
    for (std::size_t i = 0; i < u_table_.size(); ++i) {
        double worst = 0.0;
        for (std::size_t w = 0; w < psi.u_values.size(); ++w) {
            worst = std::max(worst, sup_ratio(u_table_[i][w], psi.u_values[w]));
            if (worst >= best) break;  // cannot beat the incumbent
        }
        if (worst < best) {
            best = worst;
            best_i = i;
        }
    }
    res.decision = rule_.grid.points[best_i];
    res.achieved_ratio = best;
    res.grid_index = best_i;
    return res;
}

SubstitutionResult substitute(const SubstitutionRule& rule, const PredictionGameSpec& spec,
                              const PseudoPrediction& psi) {
    return SubstitutionContext(rule, spec).substitute(psi);
}

double substitution_grid_error(const PredictionGameSpec& spec, const DecisionGrid& grid) {
    return SubstitutionContext(SubstitutionRule::minimax_grid(grid), spec).grid_error();
}

namespace {

struct InnerBracket {
    bool valid = false;
    double p_lo = 0.0, p_hi = 0.0;  // first decision coordinate
    double d_lo = 0.0, d_hi = 0.0;  // r0 - r1 at the bracket ends
    bool d_lo_known = false, d_hi_known = false;
};

// Inner minimization over the decision grid. For binary games with strictly
// monotone u-loss columns the min sits where the two ratio curves cross, so a
// binary search replaces the full scan and yields a refinement bracket.
class InnerMinimizer {
public:
    InnerMinimizer(const std::vector<std::vector<double>>& table,
                   const std::vector<DecisionVector>& points, int m)
        : table_(table), points_(points), m_(m) {
        if (m_ == 2 && table_.size() >= 2) {
            monotone_ = true;
            for (std::size_t k = 0; k + 1 < table_.size() && monotone_; ++k) {
                if (!std::isfinite(table_[k][0]) || !std::isfinite(table_[k][1]) ||
                    !(table_[k + 1][0] < table_[k][0]) || !(table_[k + 1][1] > table_[k][1]))
                    monotone_ = false;
            }
            if (monotone_) {
                if (!std::isfinite(table_.back()[0]) || !std::isfinite(table_.back()[1]))
                    monotone_ = false;
            }
        }
    }

    double grid_min(std::span<const double> a, InnerBracket* bracket) const {
        if (bracket) *bracket = InnerBracket{};
        bool normal = true;
        for (double x : a)
            if (!(x > 0.0) || !std::isfinite(x)) normal = false;
        if (!monotone_ || !normal) return scan_all(a);

        const double a0 = a[0], a1 = a[1];
        auto d_at = [&](std::size_t k) { return table_[k][0] / a0 - table_[k][1] / a1; };
        auto v_at = [&](std::size_t k) {
            return std::max(table_[k][0] / a0, table_[k][1] / a1);
        };
        const std::size_t G = table_.size();
        double d0 = d_at(0), dG = d_at(G - 1);
        if (d0 < 0.0) {
            if (bracket) {
                *bracket = {true, 1e-12, points_[0][0], 0.0, d0, false, true};
            }
            return v_at(0);
        }
        if (dG >= 0.0) {
            if (bracket) {
                *bracket = {true, points_[G - 1][0], 1.0 - 1e-12, dG, 0.0, true, false};
            }
            return v_at(G - 1);
        }
        std::size_t lo = 0, hi = G - 1;
        while (hi - lo > 1) {
            std::size_t mid = lo + (hi - lo) / 2;
            if (d_at(mid) >= 0.0) lo = mid; else hi = mid;
        }
        if (bracket) {
            *bracket = {true, points_[lo][0], points_[hi][0], d_at(lo), d_at(hi), true, true};
        }
        return std::min(v_at(lo), v_at(hi));
    }

private:
    double scan_all(std::span<const double> a) const {
        double best = kInf;
        for (const auto& row : table_) {
            double worst = 0.0;
            for (int w = 0; w < m_; ++w)
                worst = std::max(worst, sup_ratio(row[static_cast<std::size_t>(w)],
                                                  a[static_cast<std::size_t>(w)]));
            best = std::min(best, worst);
        }
        return best;
    }

    const std::vector<std::vector<double>>& table_;
    const std::vector<DecisionVector>& points_;
    int m_;
    bool monotone_ = false;
};

// Continuous refinement for binary games: regula falsi (Illinois) on the
// crossing of r0(p) = u(lambda(0, p))/a0 (decreasing) and r1 (increasing).
// Every evaluated point gives an upper bound on the inner minimum, so the
// running best never undershoots the true value.
class BinaryRefiner {
public:
    explicit BinaryRefiner(const PredictionGameSpec& spec) : spec_(spec), scratch_(2, 0.0) {}

    double refine(double a0, double a1, double grid_value, const InnerBracket& br) {
        if (!(a0 > 0.0) || !(a1 > 0.0) || !std::isfinite(a0) || !std::isfinite(a1))
            return grid_value;
        a0_ = a0;
        a1_ = a1;
        double lo = br.valid ? br.p_lo : 1e-12;
        double hi = br.valid ? br.p_hi : 1.0 - 1e-12;
        double best = grid_value;
        double flo = br.valid && br.d_lo_known ? br.d_lo : eval(lo, best);
        double fhi = br.valid && br.d_hi_known ? br.d_hi : eval(hi, best);
        if (flo <= 0.0) return std::min(best, vmax(lo));
        if (fhi >= 0.0) return std::min(best, vmax(hi));
        int side = 0;
        for (int it = 0; it < 60 && hi - lo > 1e-14; ++it) {
            double p = (lo * fhi - hi * flo) / (fhi - flo);
            if (!(p > lo && p < hi)) p = 0.5 * (lo + hi);
            double d = eval(p, best);
            if (d == 0.0) break;
            if (d > 0.0) {
                lo = p;
                flo = d;
                if (side == 1) fhi *= 0.5;
                side = 1;
            } else {
                hi = p;
                fhi = d;
                if (side == -1) flo *= 0.5;
                side = -1;
            }
        }
        return best;
    }

private:
    double eval(double p, double& best) {
        scratch_[0] = p;
        scratch_[1] = 1.0 - p;
        u0_ = spec_.profile.gen.u(spec_.loss(0, scratch_));
        u1_ = spec_.profile.gen.u(spec_.loss(1, scratch_));
        best = std::min(best, std::max(u0_ / a0_, u1_ / a1_));
        return u0_ / a0_ - u1_ / a1_;
    }

    double vmax(double p) {
        scratch_[0] = p;
        scratch_[1] = 1.0 - p;
        double u0 = spec_.profile.gen.u(spec_.loss(0, scratch_));
        double u1 = spec_.profile.gen.u(spec_.loss(1, scratch_));
        return std::max(u0 / a0_, u1 / a1_);
    }

    const PredictionGameSpec& spec_;
    DecisionVector scratch_;
    double a0_ = 0.0, a1_ = 0.0, u0_ = 0.0, u1_ = 0.0;
};

}  // namespace

MixabilityEstimate estimate_c(const PredictionGameSpec& spec, const MixabilityConfig& cfg) {
    if (!spec.loss.valid()) throw std::invalid_argument("loss not set");
    if (!std::isfinite(spec.profile.eta) || spec.profile.eta <= 0.0)
        throw std::invalid_argument("eta must be finite and positive");
    if (spec.num_outcomes < 2) throw std::invalid_argument("need at least 2 outcomes");
    if (cfg.mixture_depth < 1 || cfg.mixture_depth > 2)
        throw std::invalid_argument("mixture_depth must be 1 or 2");
    if (cfg.weight_steps < 2) throw std::invalid_argument("weight_steps must be >= 2");

    SubstitutionContext inner_ctx(SubstitutionRule::minimax_grid(cfg.decision_grid), spec);
    const auto& dec_table = inner_ctx.u_table();
    const int m = spec.num_outcomes;
    const double eta = spec.profile.eta;

    const DecisionGrid& psi_grid =
        cfg.psi_grid.points.empty() ? cfg.decision_grid : cfg.psi_grid;
    std::vector<std::vector<double>> psi_table(psi_grid.points.size());
    for (std::size_t i = 0; i < psi_grid.points.size(); ++i) {
        spec.validate_decision(psi_grid.points[i]);
        psi_table[i].resize(static_cast<std::size_t>(m));
        for (int w = 0; w < m; ++w)
            psi_table[i][static_cast<std::size_t>(w)] =
                spec.profile.gen.u(spec.loss(w, psi_grid.points[i]));
    }

    InnerMinimizer inner(dec_table, cfg.decision_grid.points, m);
    BinaryRefiner refiner(spec);
    const bool can_refine = cfg.refine && m == 2;

    MixabilityEstimate est;
    est.grid_error = inner_ctx.grid_error();
    double best = 0.0;
    InnerBracket br;

    auto consider = [&](std::span<const double> a) {
        ++est.candidates;
        double gv = inner.grid_min(a, can_refine ? &br : nullptr);
        double val = gv;
        if (can_refine && gv > best) {
            val = refiner.refine(a[0], a[1], gv, br);
            ++est.refinements;
        }
        if (val > best) best = val;
    };

    for (const auto& row : psi_table) consider(row);

    if (cfg.mixture_depth >= 2) {
        const int W = cfg.weight_steps;
        std::vector<double> M(static_cast<std::size_t>(m));
        std::vector<double> Ei(static_cast<std::size_t>(m)), Ej(static_cast<std::size_t>(m));
        std::vector<double> a(static_cast<std::size_t>(m));
        const std::size_t G = psi_table.size();
        for (std::size_t i = 0; i < G; ++i) {
            for (std::size_t j = i + 1; j < G; ++j) {
                for (int w = 0; w < m; ++w) {
                    std::size_t sw = static_cast<std::size_t>(w);
                    double Ai = -eta * psi_table[i][sw];
                    double Aj = -eta * psi_table[j][sw];
                    M[sw] = std::max(Ai, Aj);
                    if (M[sw] == -kInf) {
                        Ei[sw] = Ej[sw] = 0.0;
                    } else {
                        Ei[sw] = std::exp(Ai - M[sw]);
                        Ej[sw] = std::exp(Aj - M[sw]);
                    }
                }
                for (int wi = 1; wi < W; ++wi) {
                    double wgt = static_cast<double>(wi) / W;
                    for (int w = 0; w < m; ++w) {
                        std::size_t sw = static_cast<std::size_t>(w);
                        if (M[sw] == -kInf) {
                            a[sw] = kInf;
                            continue;
                        }
                        double s = wgt * Ei[sw] + (1.0 - wgt) * Ej[sw];
                        a[sw] = std::max(0.0, -(std::log(s) + M[sw]) / eta);
                    }
                    consider(a);
                }
            }
        }
    }

    est.c_hat = best;
    est.refined = est.refinements > 0;
    return est;
}

MixabilityVerdict is_f_mixable(const PredictionGameSpec& spec, const MixabilityConfig& cfg,
                               double tol) {
    MixabilityVerdict v;
    v.tol = tol;
    v.direct = estimate_c(spec, cfg);

    PredictionGameSpec restated = spec;
    restated.profile = make_profile(Generator::from_key("sum"), spec.profile.eta);
    restated.loss = LossFunction::composed(spec.profile.gen, spec.loss);
    v.restated = estimate_c(restated, cfg);

    v.mixable = v.direct.c_hat <= 1.0 + tol && v.restated.c_hat <= 1.0 + tol;
    return v;
}

}  // namespace aaqs
