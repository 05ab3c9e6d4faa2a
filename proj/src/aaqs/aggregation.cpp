#include "aaqs/aggregation.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <stdexcept>

#include "aaqs/numeric.hpp"

namespace aaqs {

namespace {

double focal_u(double x) {
    // (1 - e^-x)^2 * x; behaves like x^3 near 0 and like x for large x.
    double e = -std::expm1(-x);
    return e * e * x;
}

}  // namespace

Generator::Generator(GenKind k, double p, std::string key)
    : kind_(k), param_(p), key_(std::move(key)) {}

Generator Generator::from_key(const std::string& key) {
    if (key == "sum") return Generator(GenKind::Sum, 1.0, key);
    if (key == "sqrt") return Generator(GenKind::Sqrt, 0.5, key);
    if (key == "square") return Generator(GenKind::Square, 2.0, key);
    if (key == "pow10") return Generator(GenKind::Pow10, 10.0, key);
    if (key == "focal") return Generator(GenKind::Focal, 0.0, key);
    if (key.rfind("pow:", 0) == 0) {
        double p = parse_double(key.substr(4));
        if (!std::isfinite(p) || p <= 0.0)
            throw std::invalid_argument("generator exponent must be finite and positive: " + key);
        return Generator(GenKind::PowP, p, key);
    }
    throw std::invalid_argument("unknown generator key: " + key);
}

void Generator::set_u_cap(double cap) {
    if (!std::isfinite(cap) || cap <= 0.0)
        throw std::invalid_argument("u_cap must be finite and positive");
    cap_ = cap;
}

double Generator::u(double x) const {
    if (std::isnan(x) || x < 0.0) throw std::domain_error("generator input must be in [0, inf]");
    switch (kind_) {
        case GenKind::Sum: return x;
        case GenKind::Sqrt: return std::sqrt(x);
        case GenKind::Square: return x * x;
        case GenKind::Pow10: return std::pow(x, 10.0);
        case GenKind::Focal: return focal_u(x);
        case GenKind::PowP: return std::pow(x, param_);
    }
    throw std::logic_error("unreachable");
}

double Generator::u_inv(double y) const {
    if (std::isnan(y) || y < 0.0) throw std::domain_error("generator inverse input must be in [0, inf]");
    switch (kind_) {
        case GenKind::Sum: return y;
        case GenKind::Sqrt: return y * y;
        case GenKind::Square: return std::sqrt(y);
        case GenKind::Pow10: return std::pow(y, 0.1);
        case GenKind::PowP: return std::pow(y, 1.0 / param_);
        case GenKind::Focal: break;
    }
    // Focal has no closed-form inverse; bisect to adjacent doubles.
    if (y == 0.0) return 0.0;
    if (y == kInf) return kInf;
    double hi = 1.0;
    while (focal_u(hi) < y) {
        hi *= 2.0;
        if (hi == kInf) return kInf;  // y above the representable range of u
    }
    double lo = 0.0;
    while (true) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (focal_u(mid) < y) lo = mid; else hi = mid;
    }
    return (y - focal_u(lo) <= focal_u(hi) - y) ? lo : hi;
}

double Generator::domain_hi_hint() const {
    switch (kind_) {
        case GenKind::Sum: return cap_;
        case GenKind::Sqrt: return DBL_MAX;
        case GenKind::Square: return std::sqrt(cap_);
        case GenKind::Pow10: return std::pow(cap_, 0.1);
        case GenKind::Focal: return cap_;
        case GenKind::PowP: return std::pow(cap_, 1.0 / param_);
    }
    throw std::logic_error("unreachable");
}

double Generator::domain_lo_hint() const {
    double lo;
    switch (kind_) {
        case GenKind::Sum: lo = 1e-300; break;
        case GenKind::Sqrt: lo = DBL_MIN; break;
        case GenKind::Square: lo = 1e-150; break;
        case GenKind::Pow10: lo = 1e-30; break;
        case GenKind::Focal: lo = 1e-100; break;
        case GenKind::PowP: lo = std::pow(10.0, -300.0 / param_); break;
        default: throw std::logic_error("unreachable");
    }
    return std::max(lo, DBL_MIN);
}

QuasiSumResult Generator::quasi_sum(std::span<const double> xs) const {
    bool saw_overflow = false;
    double s = 0.0;
    for (double x : xs) {
        double ux = u(x);
        if (std::isfinite(x) && ux >= cap_) saw_overflow = true;
        s += ux;
    }
    if (saw_overflow) return {kInf, true};
    if (s >= cap_) {
        // Either a genuine infinite input (s == inf without any flagged term)
        // or a finite sum past the cap.
        return {kInf, std::isfinite(s)};
    }
    return {u_inv(s), false};
}

QuasiSumResult Generator::fold(double acc, double x) const {
    const double pair[2] = {acc, x};
    return quasi_sum(pair);
}

double WeightingProfile::log_f(double x) const { return -eta * gen.u(x); }

double WeightingProfile::f(double x) const { return std::exp(log_f(x)); }

double WeightingProfile::u_of_g_from_log(double log_y) const {
    // Allow a small positive overshoot: log-sum-exp over normalized weights
    // can land a few ulps above zero.
    if (std::isnan(log_y) || log_y > 1e-9)
        throw std::domain_error("g expects a value in (0, 1]");
    return std::max(0.0, -log_y / eta);
}

double WeightingProfile::g_from_log(double log_y) const {
    return gen.u_inv(u_of_g_from_log(log_y));
}

double WeightingProfile::g(double y) const {
    if (std::isnan(y) || y < 0.0 || y > 1.0 + 1e-12)
        throw std::domain_error("g expects a value in [0, 1]");
    if (y == 0.0) return kInf;
    return g_from_log(std::log(std::min(y, 1.0)));
}

WeightingProfile make_profile(const Generator& gen, double eta) {
    if (!std::isfinite(eta) || eta <= 0.0)
        throw std::invalid_argument("eta must be finite and positive");
    return WeightingProfile{gen, eta};
}

namespace {

struct AxiomState {
    AxiomReport rep;
    bool have_counter = false;

    void fail(bool AxiomReport::*flag, std::string msg) {
        rep.*flag = false;
        if (!have_counter) {
            rep.counterexample = std::move(msg);
            have_counter = true;
        }
    }
};

}  // namespace

AxiomReport check_axioms(const Generator& gen, const AxiomConfig& cfg) {
    AxiomState st;
    AxiomReport& rep = st.rep;
    Rng rng(cfg.seed);

    std::vector<double> pool;
    for (double x : cfg.grid) {
        if (std::isnan(x) || x < 0.0)
            throw std::invalid_argument("axiom grid values must be in [0, inf]");
        pool.push_back(x);
    }

    std::size_t target = cfg.random_triples > 0 ? 256 : (pool.empty() ? 32 : pool.size());
    const double lo = gen.domain_lo_hint() * 1e3;
    const double hi = gen.domain_hi_hint() * 1e-3;
    const double llo = std::log(lo), lhi = std::log(std::max(hi, lo * 2.0));
    while (pool.size() < target) pool.push_back(std::exp(llo + rng.unit() * (lhi - llo)));

    rep.total_points = static_cast<int>(pool.size());
    std::vector<double> ev;  // points where u is finite and under the cap
    for (double x : pool) {
        if (!std::isfinite(x)) continue;
        double ux = gen.u(x);
        if (!std::isfinite(ux) || ux >= gen.u_cap()) {
            rep.overflow_seen = true;
            continue;
        }
        ev.push_back(x);
    }
    rep.evaluable_points = static_cast<int>(ev.size());
    if (ev.size() < 3) {
        rep.counterexample = "fewer than 3 evaluable grid points";
        return rep;
    }

    rep.continuity = rep.monotonicity = rep.associativity = rep.loss_compatibility = true;
    rep.homogeneity = cfg.test_homogeneity;

    // A4: the quasi-sum of a single value is that value.
    for (double x : ev) {
        double q = gen.quasi_sum(std::span<const double>(&x, 1)).value;
        if (std::fabs(q - x) > cfg.ident_tol * std::max(1.0, x)) {
            st.fail(&AxiomReport::loss_compatibility,
                    "A4: x=" + format17(x) + " Q(x)=" + format17(q));
            break;
        }
    }

    // A2: strict monotonicity. u strict on distinct points implies the
    // quasi-sum is strictly increasing in each argument; the Q-level check is
    // non-strict to allow rounding ties in u_inv.
    {
        std::vector<double> s(ev);
        std::sort(s.begin(), s.end());
        for (std::size_t i = 0; i + 1 < s.size(); ++i) {
            if (s[i] == s[i + 1]) continue;
            if (!(gen.u(s[i]) < gen.u(s[i + 1]))) {
                st.fail(&AxiomReport::monotonicity,
                        "A2: u(" + format17(s[i]) + ") >= u(" + format17(s[i + 1]) + ")");
                break;
            }
            double z = s[s.size() / 2];
            double qa = gen.fold(s[i], z).value;
            double qb = gen.fold(s[i + 1], z).value;
            if (qa > qb) {
                st.fail(&AxiomReport::monotonicity,
                        "A2: Q(" + format17(s[i]) + "," + format17(z) + ") > Q(" +
                            format17(s[i + 1]) + "," + format17(z) + ")");
                break;
            }
        }
    }

    // Homogeneity sampling needs moderate magnitudes: far from 1, curved
    // generators (focal) are numerically indistinguishable from linear ones.
    std::vector<double> hb;
    for (double x : ev)
        if (x >= 1e-2 && x <= 1e2) hb.push_back(x);
    for (double x : {0.05, 0.3, 1.0, 2.5}) {
        double ux = gen.u(x);
        if (std::isfinite(ux) && ux < gen.u_cap()) hb.push_back(x);
    }

    const int triples = cfg.random_triples > 0 ? cfg.random_triples : 5000;
    int homog_tested = 0;
    for (int t = 0; t < triples; ++t) {
        double x = ev[rng.index(ev.size())];
        double y = ev[rng.index(ev.size())];
        double z = ev[rng.index(ev.size())];
        double tscale = std::exp(std::log(0.1) + rng.unit() * std::log(100.0));

        // A3: folding left equals the batch quasi-sum.
        const double xyz[3] = {x, y, z};
        QuasiSumResult batch = gen.quasi_sum(xyz);
        QuasiSumResult q1 = gen.fold(x, y);
        if (!batch.overflow && !q1.overflow) {
            QuasiSumResult q2 = gen.fold(q1.value, z);
            if (!q2.overflow && rep.associativity) {
                double diff = std::fabs(q2.value - batch.value);
                if (!(diff <= cfg.assoc_tol * std::max(1.0, std::fabs(batch.value)))) {
                    st.fail(&AxiomReport::associativity,
                            "A3: x=" + format17(x) + " y=" + format17(y) + " z=" + format17(z) +
                                " fold=" + format17(q2.value) + " batch=" + format17(batch.value));
                }
            }
        }

        // A1: a 1e-9 relative nudge of one argument moves the output by a
        // comparably small relative amount.
        if (x > 0.0 && rep.continuity) {
            double xp = x * (1.0 + 1e-9);
            if (std::isfinite(xp) && gen.u(xp) < gen.u_cap()) {
                double qb = gen.fold(x, y).value;
                double qp = gen.fold(xp, y).value;
                double scale = std::max({qb, x, y});
                if (!(std::fabs(qp - qb) <= cfg.cont_tol * scale)) {
                    st.fail(&AxiomReport::continuity,
                            "A1: x=" + format17(x) + " y=" + format17(y) + " dQ=" +
                                format17(qp - qb));
                }
            }
        }

        // Homogeneity probe (power family only): Q(t*x, t*y) = t * Q(x, y).
        if (cfg.test_homogeneity && rep.homogeneity && !hb.empty()) {
            double hx = hb[rng.index(hb.size())];
            double hy = hb[rng.index(hb.size())];
            double tx = tscale * hx, ty = tscale * hy;
            if (std::isfinite(tx) && std::isfinite(ty) && gen.u(std::max(tx, ty)) < gen.u_cap()) {
                double qt = gen.fold(tx, ty).value;
                double expect = tscale * gen.fold(hx, hy).value;
                ++homog_tested;
                if (!(std::fabs(qt - expect) <= cfg.homog_tol * std::max(1.0, std::fabs(expect)))) {
                    rep.homogeneity = false;  // informational, not a counterexample
                }
            }
        }
    }
    if (cfg.test_homogeneity && homog_tested == 0) rep.homogeneity = false;
    return rep;
}

}  // namespace aaqs
