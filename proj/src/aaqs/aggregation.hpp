#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace aaqs {

enum class GenKind { Sum, Sqrt, Square, Pow10, Focal, PowP };

struct QuasiSumResult {
    double value = 0.0;
    bool overflow = false;  // a finite input pushed u past the cap
};

// Strictly increasing u: [0, inf] -> [0, inf] with u(0) = 0. The catalog is
// addressed by key: "sum", "sqrt", "square", "pow10", "focal", "pow:<p>".
class Generator {
public:
    Generator() : Generator(GenKind::Sum, 1.0, "sum") {}
    static Generator from_key(const std::string& key);

    const std::string& key() const { return key_; }
    GenKind kind() const { return kind_; }
    double param() const { return param_; }

    double u(double x) const;      // rejects negative and NaN inputs
    double u_inv(double y) const;  // rejects negative, NaN, and y > u-range

    double u_cap() const { return cap_; }
    void set_u_cap(double cap);

    // Largest/smallest positive x for which u stays inside (0, u_cap)
    // without overflow or underflow. Used to pick probe ranges.
    double domain_hi_hint() const;
    double domain_lo_hint() const;

    // u_inv(sum of u(x_i)). A finite x_i whose u reaches the cap saturates the
    // result to +inf and sets the overflow flag; an infinite x_i saturates
    // without the flag (a genuine infinite loss, not a numeric artifact).
    QuasiSumResult quasi_sum(std::span<const double> xs) const;

    // Two-argument quasi-sum, for incremental folding. Saturation is sticky:
    // fold(inf, x) stays inf.
    QuasiSumResult fold(double acc, double x) const;

private:
    Generator(GenKind k, double p, std::string key);

    GenKind kind_;
    double param_;  // exponent for PowP, unused otherwise
    std::string key_;
    double cap_ = 1e300;
};

// f_eta(x) = exp(-eta * u(x)), g_eta(y) = u_inv(-ln(y) / eta).
struct WeightingProfile {
    Generator gen;
    double eta = 1.0;

    double log_f(double x) const;
    double f(double x) const;
    // g with the argument already in log-domain; log_y must be <= 0.
    double g_from_log(double log_y) const;
    double u_of_g_from_log(double log_y) const;  // skips the final u_inv
    double g(double y) const;
};

WeightingProfile make_profile(const Generator& gen, double eta);

struct AxiomConfig {
    std::vector<double> grid;       // explicit probe points, may be empty
    int random_triples = 0;         // 0 means the default of 5000
    std::uint64_t seed = 0;
    double ident_tol = 1e-12;       // |Q(x) - x| <= tol * max(1, x)
    double assoc_tol = 1e-9;        // relative, fold vs batch
    double cont_tol = 1e-7;         // relative response to a 1e-9 relative nudge
    bool test_homogeneity = true;
    double homog_tol = 1e-9;
};

struct AxiomReport {
    bool continuity = false;
    bool monotonicity = false;
    bool associativity = false;
    bool loss_compatibility = false;
    bool homogeneity = false;  // not an axiom: true only for the power family
    bool overflow_seen = false;
    int evaluable_points = 0;
    int total_points = 0;
    std::string counterexample;  // first axiom failure, empty when clean

    bool all_axioms() const {
        return continuity && monotonicity && associativity && loss_compatibility;
    }
};

AxiomReport check_axioms(const Generator& gen, const AxiomConfig& cfg);

}  // namespace aaqs
