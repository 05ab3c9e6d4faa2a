#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <random>
#include <span>
#include <stdexcept>
#include <string>

namespace aaqs {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// log(sum(exp(v_i))) with the max subtracted before exponentiating.
// Entries of -inf contribute nothing; if all entries are -inf the result is -inf.
inline double log_sum_exp(std::span<const double> v) {
    double m = -kInf;
    for (double x : v) {
        if (std::isnan(x)) throw std::domain_error("log_sum_exp: NaN input");
        if (x > m) m = x;
    }
    if (m == -kInf) return -kInf;
    double s = 0.0;
    for (double x : v) s += std::exp(x - m);
    return m + std::log(s);
}

// Shortest exact decimal for a double: 17 significant digits round-trip.
// Infinities print as "inf"/"-inf"; NaN is rejected because no artifact value
// is allowed to be NaN.
inline std::string format17(double x) {
    if (std::isnan(x)) throw std::domain_error("format17: NaN value");
    if (x == kInf) return "inf";
    if (x == -kInf) return "-inf";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

inline double parse_double(const std::string& s) {
    const char* c = s.c_str();
    char* end = nullptr;
    double v = std::strtod(c, &end);
    if (end == c || *end != '\0') throw std::invalid_argument("not a number: '" + s + "'");
    return v;
}

// Compensated sum; saturates to +inf as soon as an infinite term appears so
// the compensation never produces NaN. Losses are nonnegative, so -inf terms
// are rejected.
inline double kahan_sum(std::span<const double> xs) {
    double s = 0.0, c = 0.0;
    for (double x : xs) {
        if (std::isnan(x) || x == -kInf) throw std::domain_error("kahan_sum: invalid term");
        if (x == kInf) return kInf;
        double y = x - c;
        double t = s + y;
        c = (t - s) - y;
        s = t;
    }
    return s;
}

// Deterministic RNG. The generator is mt19937_64 (stable across platforms);
// the integer/unit mappings are spelled out here because std::uniform_*
// distributions are implementation defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next() { return gen_(); }

    std::size_t index(std::size_t n) {
        if (n == 0) throw std::invalid_argument("Rng::index: empty range");
        return static_cast<std::size_t>(gen_() % n);
    }

    // Uniform in [0, 1) with 53 random bits.
    double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 gen_;
};

}  // namespace aaqs
