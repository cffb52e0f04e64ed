#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mfsign/characters.hpp"
#include "mfsign/cyclotomic.hpp"
#include "mfsign/errors.hpp"

namespace mfsign {
namespace density {

using chars::DirichletCharacter;
using cyclo::CyclotomicRational;

// ---------------------------------------------------------------------------
// the multiplicative sign function
//
//   f(n) = sign( a(t n^2) / chi(n) )  when gcd(n, N) = 1,   0 otherwise
//
// backed by a dense table for 1 <= n <= X
// ---------------------------------------------------------------------------

struct SignFunction {
    std::int64_t X = 0;
    std::int64_t N = 1;  // level driving the gcd mask
    std::int64_t t = 1;
    std::vector<std::int8_t> f;  // index 0 unused

    int at(std::int64_t n) const {
        if (n < 1 || n > X)
            throw std::out_of_range("SignFunction::at: index " + std::to_string(n) +
                                    " outside [1, " + std::to_string(X) + "]");
        return f[static_cast<std::size_t>(n)];
    }
};

// Build the table from the inverted coefficient list a_tnn (index n holds
// a(t n^2), as produced by invert_lift).  Signs are certified exactly;
// a value that is not fixed by conjugation raises reality_violation.
inline SignFunction sign_function(const std::vector<CyclotomicRational>& a_tnn,
                                  const DirichletCharacter& chi, std::int64_t N,
                                  std::int64_t t) {
    if (a_tnn.size() < 2) throw std::domain_error("sign_function: empty coefficient table");
    SignFunction out;
    out.X = static_cast<std::int64_t>(a_tnn.size()) - 1;
    out.N = N;
    out.t = t;
    out.f.assign(a_tnn.size(), 0);
    for (std::int64_t n = 1; n <= out.X; ++n) {
        if (std::gcd(n, N) != 1) continue;
        auto chi_n = chi(n);
        if (!chi_n) continue;  // character undefined: stays masked to zero
        const auto& a = a_tnn[static_cast<std::size_t>(n)];
        int s;
        if (a.is_zero()) {
            s = 0;
        } else {
            if (!chi_n->is_one()) {
                CyclotomicRational v =
                    a * CyclotomicRational::from_root(chi_n->inverse());
                if (!v.is_real())
                    throw reality_violation(
                        n, "sign_function: a(t n^2)/chi(n) not real at n = " +
                               std::to_string(n));
                s = v.sign_real();
            } else {
                if (!a.is_real())
                    throw reality_violation(
                        n, "sign_function: a(t n^2) not real at n = " + std::to_string(n));
                s = a.sign_real();
            }
        }
        out.f[static_cast<std::size_t>(n)] = static_cast<std::int8_t>(s);
    }
    return out;
}

// the four-case definition, with the gcd mask recomputed against the given N
inline int sign_f(std::int64_t n, const SignFunction& signs, std::int64_t N) {
    if (std::gcd(n, N) != 1) return 0;
    return signs.at(n);
}

// ---------------------------------------------------------------------------
// multiplicativity spot check: f(mn) = f(m) f(n) on random coprime pairs
// ---------------------------------------------------------------------------

struct MultiplicativityReport {
    std::int64_t checked = 0;
    std::vector<std::pair<std::int64_t, std::int64_t>> violations;
};

inline MultiplicativityReport multiplicativity_check(const SignFunction& f,
                                                     std::int64_t pair_count, std::int64_t X,
                                                     std::uint64_t seed = 1) {
    if (X > f.X) throw std::out_of_range("multiplicativity_check: X beyond the table");
    if (f.at(1) != 1)
        throw std::domain_error("multiplicativity_check: requires a(t) > 0, i.e. f(1) = 1");
    MultiplicativityReport rep;
    std::mt19937_64 gen(seed);
    while (rep.checked < pair_count) {
        std::int64_t m =
            1 + static_cast<std::int64_t>(gen() % static_cast<std::uint64_t>(X));
        std::int64_t cap = X / m;
        std::int64_t n =
            1 + static_cast<std::int64_t>(gen() % static_cast<std::uint64_t>(cap));
        if (std::gcd(m, n) != 1) continue;
        ++rep.checked;
        if (f.at(m * n) != f.at(m) * f.at(n)) rep.violations.emplace_back(m, n);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Dedekind-Dirichlet density estimator: delta * sum_{n <= X, n in A} n^{-(1+delta)}
// with the integral-comparison tail bound X^{-delta} printed alongside
// ---------------------------------------------------------------------------

struct DDEstimate {
    double delta = 0;
    double estimate = 0;
    double tail_bound = 0;
};

inline void validate_delta_grid(const std::vector<double>& grid) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] > 0)) throw std::domain_error("delta grid: entries must be positive");
        if (i > 0 && !(grid[i] < grid[i - 1]))
            throw std::domain_error("delta grid: entries must be strictly decreasing");
    }
}

template <typename Indicator>
std::vector<DDEstimate> dedekind_dirichlet_estimate(Indicator&& in_set,
                                                    const std::vector<double>& delta_grid,
                                                    std::int64_t X) {
    validate_delta_grid(delta_grid);
    if (X < 1) throw std::domain_error("dedekind_dirichlet_estimate: X must be >= 1");
    std::vector<DDEstimate> out;
    out.reserve(delta_grid.size());
    for (double delta : delta_grid) {
        double sum = 0;
        for (std::int64_t n = 1; n <= X; ++n)
            if (in_set(n)) sum += std::pow(static_cast<double>(n), -(1.0 + delta));
        DDEstimate e;
        e.delta = delta;
        e.estimate = delta * sum;
        e.tail_bound = std::pow(static_cast<double>(X), -delta);
        out.push_back(e);
    }
    return out;
}

// ---------------------------------------------------------------------------
// main counting experiment over an arithmetic progression
// ---------------------------------------------------------------------------

struct DensityReport {
    std::int64_t q = 1, d = 0, X = 0;
    // counts over {n <= X : n == d (mod q)}
    std::int64_t positive = 0, negative = 0, zero = 0;  // among gcd(n, N) = 1
    std::int64_t out_of_class = 0;                      // in class but gcd(n, N) != 1
    std::int64_t nonzero = 0;                           // positive + negative
    double pos_ratio = 0, neg_ratio = 0;                // against nonzero
    double radius = 0;                                  // 1 / sqrt(nonzero)
    double diff_quotient = 0;                           // (positive - negative) / X
    double sum_quotient = 0;                            // (positive + negative) / X
    std::vector<DDEstimate> dd;                         // over the nonzero in-class set
};

inline DensityReport main_theorem_experiment(const SignFunction& f, std::int64_t q,
                                             std::int64_t d, std::int64_t X,
                                             const std::vector<double>& delta_grid = {}) {
    if (q < 1 || std::gcd(((d % q) + q) % q, q) != 1)
        throw std::domain_error("main_theorem_experiment: need gcd(d, q) = 1");
    if (X > f.X) throw std::out_of_range("main_theorem_experiment: X beyond the table");
    DensityReport rep;
    rep.q = q;
    rep.d = ((d % q) + q) % q;
    rep.X = X;
    for (std::int64_t n = (rep.d == 0 ? q : rep.d); n <= X; n += q) {
        if (std::gcd(n, f.N) != 1) {
            ++rep.out_of_class;
            continue;
        }
        int s = f.at(n);
        if (s > 0)
            ++rep.positive;
        else if (s < 0)
            ++rep.negative;
        else
            ++rep.zero;
    }
    rep.nonzero = rep.positive + rep.negative;
    if (rep.nonzero > 0) {
        rep.pos_ratio = static_cast<double>(rep.positive) / static_cast<double>(rep.nonzero);
        rep.neg_ratio = static_cast<double>(rep.negative) / static_cast<double>(rep.nonzero);
        rep.radius = 1.0 / std::sqrt(static_cast<double>(rep.nonzero));
    }
    rep.diff_quotient =
        static_cast<double>(rep.positive - rep.negative) / static_cast<double>(X);
    rep.sum_quotient = static_cast<double>(rep.nonzero) / static_cast<double>(X);
    if (!delta_grid.empty()) {
        rep.dd = dedekind_dirichlet_estimate(
            [&](std::int64_t n) {
                return n % q == rep.d && std::gcd(n, f.N) == 1 && f.at(n) != 0;
            },
            delta_grid, X);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Delange partial sums |sum_{n <= x} f(n) eps(n)| / x at checkpoints.
// The accumulation is exact: integer weights per power of zeta_L, embedded
// to the modulus only when a checkpoint is reported.
// ---------------------------------------------------------------------------

inline std::vector<std::pair<std::int64_t, double>> delange_partial_sums(
    const SignFunction& f, const DirichletCharacter& eps,
    const std::vector<std::int64_t>& checkpoints) {
    for (std::size_t i = 0; i < checkpoints.size(); ++i) {
        if (checkpoints[i] < 1 || checkpoints[i] > f.X)
            throw std::out_of_range("delange_partial_sums: checkpoint beyond the table");
        if (i > 0 && checkpoints[i] <= checkpoints[i - 1])
            throw std::domain_error("delange_partial_sums: checkpoints must increase");
    }
    const std::int64_t L = eps.order();
    std::vector<Rat> weights(static_cast<std::size_t>(L), Rat(0));
    std::vector<std::pair<std::int64_t, double>> out;
    out.reserve(checkpoints.size());
    std::size_t next = 0;
    for (std::int64_t n = 1; n <= f.X && next < checkpoints.size(); ++n) {
        int s = f.at(n);
        if (s != 0) {
            auto e = eps(n);
            if (e) {
                // exponent of zeta_L in lowest terms is exp * (L / order)
                std::int64_t idx = (e->exponent() * (L / e->order())) % L;
                weights[static_cast<std::size_t>(idx)] += s;
            }
        }
        if (n == checkpoints[next]) {
            auto total = CyclotomicRational::from_coefficients(L, weights);
            double mag = std::abs(total.to_complex());
            out.emplace_back(n, mag / static_cast<double>(n));
            ++next;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// the 1/q identity diagnostic: delta-weighted version of
//   2 sum_{f > 0, n == d} n^{-z} + sum_{f = 0, unit, n == d} n^{-z}
//     + sum_{(n, N) != 1, n == d} n^{-z}  ->  1/q
// (hypothesis: q = N or gcd(q, N) = 1)
// ---------------------------------------------------------------------------

struct IdentityDiagnostic {
    std::int64_t q = 1, d = 0, X = 0;
    double delta = 0;
    double value = 0;       // the delta-weighted combination
    double target = 0;      // 1/q
    double deviation = 0;   // |value - target|
    double tail_bound = 0;  // 2 X^{-delta}: max weight is 2
};

inline IdentityDiagnostic identity_1q_diagnostic(const SignFunction& f, std::int64_t q,
                                                 std::int64_t d, double delta,
                                                 std::int64_t X) {
    if (!(q == f.N || std::gcd(q, f.N) == 1))
        throw std::domain_error(
            "identity_1q_diagnostic: hypothesis requires q = N or gcd(q, N) = 1");
    if (q < 1 || std::gcd(((d % q) + q) % q, q) != 1)
        throw std::domain_error("identity_1q_diagnostic: need gcd(d, q) = 1");
    if (!(delta > 0)) throw std::domain_error("identity_1q_diagnostic: delta must be > 0");
    if (X > f.X) throw std::out_of_range("identity_1q_diagnostic: X beyond the table");
    IdentityDiagnostic rep;
    rep.q = q;
    rep.d = ((d % q) + q) % q;
    rep.X = X;
    rep.delta = delta;
    double sum = 0;
    for (std::int64_t n = (rep.d == 0 ? q : rep.d); n <= X; n += q) {
        int w;
        if (std::gcd(n, f.N) != 1)
            w = 1;
        else if (f.at(n) > 0)
            w = 2;
        else if (f.at(n) == 0)
            w = 1;
        else
            w = 0;
        if (w != 0) sum += w * std::pow(static_cast<double>(n), -(1.0 + delta));
    }
    rep.value = delta * sum;
    rep.target = 1.0 / static_cast<double>(q);
    rep.deviation = std::abs(rep.value - rep.target);
    rep.tail_bound = 2.0 * std::pow(static_cast<double>(X), -delta);
    return rep;
}

// ---------------------------------------------------------------------------
// d-independence: the nonzero-count ratio should not depend on the class
// ---------------------------------------------------------------------------

struct ClassDensityRow {
    std::int64_t d = 0;
    std::int64_t nonzero = 0;
    double ratio = 0;  // nonzero / X
};

struct DIndependenceReport {
    std::int64_t q = 1, X = 0;
    std::vector<ClassDensityRow> classes;  // one per unit class mod q
    double max_deviation = 0;              // max pairwise |ratio_i - ratio_j|
};

inline DIndependenceReport d_independence_check(const SignFunction& f, std::int64_t q,
                                                std::int64_t X) {
    if (q < 1) throw std::domain_error("d_independence_check: q must be >= 1");
    if (X > f.X) throw std::out_of_range("d_independence_check: X beyond the table");
    DIndependenceReport rep;
    rep.q = q;
    rep.X = X;
    for (std::int64_t d = (q == 1 ? 0 : 1); d < std::max<std::int64_t>(q, 1); ++d) {
        if (std::gcd(d == 0 ? q : d, q) != 1) continue;
        ClassDensityRow row;
        row.d = d;
        for (std::int64_t n = (d == 0 ? q : d); n <= X; n += q)
            if (std::gcd(n, f.N) == 1 && f.at(n) != 0) ++row.nonzero;
        row.ratio = static_cast<double>(row.nonzero) / static_cast<double>(X);
        rep.classes.push_back(row);
    }
    for (const auto& a : rep.classes)
        for (const auto& b : rep.classes)
            rep.max_deviation = std::max(rep.max_deviation, std::abs(a.ratio - b.ratio));
    return rep;
}

} // namespace density
} // namespace mfsign
