#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/constants/constants.hpp>

#include "mfsign/characters.hpp"
#include "mfsign/cyclotomic.hpp"
#include "mfsign/rng.hpp"
#include "mfsign/shimura.hpp"

namespace mfsign {
namespace satotate {

// ---------------------------------------------------------------------------
// semicircle measure (2/pi) sqrt(1 - t^2) dt on [-1, 1]
// ---------------------------------------------------------------------------

inline double st_cdf(double x) {
    if (!(x >= -1.0 && x <= 1.0))
        throw std::domain_error("st_cdf: argument outside [-1, 1]");
    const double pi = boost::math::constants::pi<double>();
    return 0.5 + (x * std::sqrt(1.0 - x * x) + std::asin(x)) / pi;
}

inline double st_measure(double a, double b) {
    if (!(a >= -1.0 && a <= b && b <= 1.0))
        throw std::domain_error("st_measure: need -1 <= a <= b <= 1");
    return st_cdf(b) - st_cdf(a);
}

// i.i.d. semicircle draws; deterministic per seed
inline std::vector<double> st_sample(std::uint64_t seed, std::int64_t count) {
    if (count < 1) throw std::domain_error("st_sample: count must be >= 1");
    std::mt19937_64 gen(seed);
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(count));
    for (std::int64_t i = 0; i < count; ++i) out.push_back(rng::semicircle(gen));
    return out;
}

// one-sample Kolmogorov-Smirnov statistic against a reference CDF.
// The sample must be sorted; duplicated points leave the value unchanged.
template <typename Cdf>
double ks_statistic(const std::vector<double>& sorted_sample, Cdf&& cdf) {
    if (sorted_sample.empty()) throw std::domain_error("ks_statistic: empty sample");
    const double n = static_cast<double>(sorted_sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted_sample.size(); ++i) {
        double f = cdf(sorted_sample[i]);
        d = std::max(d, f - static_cast<double>(i) / n);
        d = std::max(d, static_cast<double>(i + 1) / n - f);
    }
    return d;
}

// ---------------------------------------------------------------------------
// restrictions on the prime sample: everything, a progression class, or a
// prescribed character value
// ---------------------------------------------------------------------------

struct Restriction {
    enum class Type { all, progression, char_value };
    Type type = Type::all;
    std::int64_t d = 0, q = 1;          // progression
    chars::DirichletCharacter eps;      // char_value
    cyclo::RootOfUnity xi;

    static Restriction everything() { return Restriction{}; }

    static Restriction progression(std::int64_t d, std::int64_t q) {
        if (q < 1 || std::gcd(((d % q) + q) % q, q) != 1)
            throw std::domain_error("Restriction: need gcd(d, q) = 1");
        Restriction r;
        r.type = Type::progression;
        r.q = q;
        r.d = ((d % q) + q) % q;
        return r;
    }

    static Restriction character_value(const chars::DirichletCharacter& eps,
                                       const cyclo::RootOfUnity& xi) {
        auto image = eps.image();
        if (std::find(image.begin(), image.end(), xi) == image.end())
            throw std::domain_error("Restriction: xi is not a value of the character");
        Restriction r;
        r.type = Type::char_value;
        r.eps = eps;
        r.xi = xi;
        return r;
    }

    bool admits(std::int64_t p) const {
        switch (type) {
            case Type::all: return true;
            case Type::progression: return p % q == d;
            case Type::char_value: {
                auto v = eps(p);
                return v && *v == xi;
            }
        }
        return false;
    }

    // expected share of primes meeting the restriction (Dirichlet / Chebotarev)
    double expected_share() const {
        switch (type) {
            case Type::all: return 1.0;
            case Type::progression:
                return 1.0 / static_cast<double>(arith::euler_phi(q));
            case Type::char_value:
                // values of eps are equidistributed over its image
                return 1.0 / static_cast<double>(eps.order());
        }
        return 1.0;
    }

    std::string label() const {
        switch (type) {
            case Type::all: return "all";
            case Type::progression:
                return std::to_string(d) + " mod " + std::to_string(q);
            case Type::char_value: return eps.label() + "=" + xi.label();
        }
        return "?";
    }
};

// ---------------------------------------------------------------------------
// empirical distribution of a restricted B-sample
// ---------------------------------------------------------------------------

struct IntervalRow {
    double a = 0, b = 0;        // closed interval [a, b]
    std::int64_t count = 0;     // sample points with B in [a, b]
    double empirical = 0;       // count / sample size
    double predicted = 0;       // st_measure(a, b)
};

inline constexpr int interval_bins = 20;

struct STStats {
    Restriction restriction;
    std::int64_t x_max = 0;
    std::vector<double> sample;  // sorted
    double ks_distance = 0;
    double chi_square = 0;       // over the half-open 20-bin partition
    std::vector<IntervalRow> interval_table;

    // closed-interval count via binary search on the sorted sample
    std::int64_t count_in(double a, double b) const {
        auto lo = std::lower_bound(sample.begin(), sample.end(), a);
        auto hi = std::upper_bound(sample.begin(), sample.end(), b);
        return hi - lo;
    }
};

inline std::optional<STStats> restricted_sample(const shimura::NormalizedEigenvalues& B,
                                                const Restriction& r, std::int64_t x_max) {
    if (x_max > B.x_max)
        throw std::out_of_range("restricted_sample: table covers primes <= " +
                                std::to_string(B.x_max) + " < x_max");
    STStats s;
    s.restriction = r;
    s.x_max = x_max;
    for (const auto& [p, b] : B.table) {
        if (p > x_max) break;
        if (r.admits(p)) s.sample.push_back(b);
    }
    if (s.sample.empty()) return std::nullopt;
    std::sort(s.sample.begin(), s.sample.end());
    s.ks_distance = ks_statistic(s.sample, [](double x) { return st_cdf(x); });

    const double n = static_cast<double>(s.sample.size());
    s.interval_table.reserve(interval_bins);
    for (int i = 0; i < interval_bins; ++i) {
        IntervalRow row;
        row.a = -1.0 + 2.0 * i / interval_bins;
        row.b = -1.0 + 2.0 * (i + 1) / interval_bins;
        row.count = s.count_in(row.a, row.b);
        row.empirical = static_cast<double>(row.count) / n;
        row.predicted = st_measure(row.a, row.b);
        s.interval_table.push_back(row);
    }
    // chi-square over the matching half-open partition [a, b), last bin closed
    double chi2 = 0.0;
    std::size_t lo = 0;
    for (int i = 0; i < interval_bins; ++i) {
        double b_edge = -1.0 + 2.0 * (i + 1) / interval_bins;
        std::size_t hi =
            (i + 1 == interval_bins)
                ? s.sample.size()
                : static_cast<std::size_t>(
                      std::lower_bound(s.sample.begin(), s.sample.end(), b_edge) -
                      s.sample.begin());
        double expected = n * s.interval_table[static_cast<std::size_t>(i)].predicted;
        double observed = static_cast<double>(hi - lo);
        chi2 += (observed - expected) * (observed - expected) / expected;
        lo = hi;
    }
    s.chi_square = chi2;
    return s;
}

// ---------------------------------------------------------------------------
// sign densities over a progression of primes
// ---------------------------------------------------------------------------

struct SignDensityReport {
    std::int64_t q = 1, d = 0, x = 0;
    std::int64_t positive = 0, negative = 0, zero = 0;
    std::int64_t class_primes = 0;  // primes <= x in the class (with sign data)
    std::int64_t total_primes = 0;  // all primes <= x with sign data
    // ratios against the class count pi_{d,q}(x)
    double pos_ratio_class = 0, neg_ratio_class = 0, zero_ratio_class = 0;
    // ratios against the full count pi(x), for comparison with 1/(2 phi(q))
    double pos_ratio_all = 0, neg_ratio_all = 0, zero_ratio_all = 0;
};

// signs: ascending (p, sign of a(t p^2)/chi(p)) pairs
inline std::optional<SignDensityReport> prime_sign_densities(
    const std::vector<std::pair<std::int64_t, int>>& signs, std::int64_t d, std::int64_t q,
    std::int64_t x) {
    if (q < 1 || std::gcd(((d % q) + q) % q, q) != 1)
        throw std::domain_error("prime_sign_densities: need gcd(d, q) = 1");
    SignDensityReport rep;
    rep.q = q;
    rep.d = ((d % q) + q) % q;
    rep.x = x;
    for (const auto& [p, s] : signs) {
        if (p > x) break;
        ++rep.total_primes;
        if (p % q != rep.d) continue;
        ++rep.class_primes;
        if (s > 0)
            ++rep.positive;
        else if (s < 0)
            ++rep.negative;
        else
            ++rep.zero;
    }
    if (rep.class_primes == 0) return std::nullopt;
    auto ratio = [](std::int64_t a, std::int64_t b) {
        return static_cast<double>(a) / static_cast<double>(b);
    };
    rep.pos_ratio_class = ratio(rep.positive, rep.class_primes);
    rep.neg_ratio_class = ratio(rep.negative, rep.class_primes);
    rep.zero_ratio_class = ratio(rep.zero, rep.class_primes);
    rep.pos_ratio_all = ratio(rep.positive, rep.total_primes);
    rep.neg_ratio_all = ratio(rep.negative, rep.total_primes);
    rep.zero_ratio_all = ratio(rep.zero, rep.total_primes);
    return rep;
}

// ---------------------------------------------------------------------------
// power-law fit of an error term: |E(x)| ~ C x^{-alpha}
// ---------------------------------------------------------------------------

struct ErrorFit {
    std::vector<std::pair<double, double>> checkpoints;  // the points used
    double C = 0;
    double alpha = 0;
    double residual = 0;  // root mean square in log space
};

inline ErrorFit error_term_fit(const std::vector<std::pair<double, double>>& checkpoints) {
    // least squares on log|E| = log C - alpha log x, over usable points only
    std::vector<std::pair<double, double>> pts;  // (log x, log |E|)
    ErrorFit fit;
    for (const auto& [x, e] : checkpoints) {
        if (!(x > 0) || e == 0.0 || !std::isfinite(e)) continue;
        bool dup = false;
        for (const auto& q : fit.checkpoints)
            if (q.first == x) dup = true;
        if (dup) continue;
        fit.checkpoints.emplace_back(x, e);
        pts.emplace_back(std::log(x), std::log(std::abs(e)));
    }
    if (pts.size() < 3)
        throw std::domain_error("error_term_fit: need at least 3 checkpoints with distinct x "
                                "and nonzero E");
    double su = 0, sv = 0, suu = 0, suv = 0;
    for (const auto& [u, v] : pts) {
        su += u;
        sv += v;
        suu += u * u;
        suv += u * v;
    }
    const double n = static_cast<double>(pts.size());
    const double denom = n * suu - su * su;
    const double slope = (n * suv - su * sv) / denom;
    const double intercept = (sv - slope * su) / n;
    fit.alpha = -slope;
    fit.C = std::exp(intercept);
    double rss = 0;
    for (const auto& [u, v] : pts) {
        double r = v - (intercept + slope * u);
        rss += r * r;
    }
    fit.residual = std::sqrt(rss / n);
    return fit;
}

} // namespace satotate
} // namespace mfsign
