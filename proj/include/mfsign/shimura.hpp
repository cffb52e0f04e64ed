#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "mfsign/arith.hpp"
#include "mfsign/characters.hpp"
#include "mfsign/cyclotomic.hpp"
#include "mfsign/errors.hpp"
#include "mfsign/halfint.hpp"
#include "mfsign/qseries.hpp"
#include "mfsign/rng.hpp"

namespace mfsign {
namespace shimura {

using chars::DirichletCharacter;
using cyclo::CyclotomicRational;

// chi_{t,N}(d) = chi(d) * ((-1)^k N^2 t | d), exact.
inline CyclotomicRational chi_tN(std::int64_t d, const DirichletCharacter& chi, std::int64_t t,
                                 std::int64_t N, int k) {
    Int arg = Int(N) * N * t;
    if (k % 2 != 0) arg = -arg;
    int sym = arith::kronecker(arg, Int(d));
    if (sym == 0) return CyclotomicRational();
    return chi.value(d) * Rat(sym);
}

// ---------------------------------------------------------------------------
// LiftedForm: weight-2k coefficient table A(n), 1 <= n <= trunc, with the
// originating a(t) carried alongside (never silently normalized to 1).
// `level` is bookkeeping only; arithmetic guards use character moduli.
// ---------------------------------------------------------------------------

struct LiftedForm {
    int weight2k = 12;
    std::int64_t level = 1;
    DirichletCharacter character;  // chi^2 of the source form (or principal)
    std::int64_t t = 1;
    CyclotomicRational a_t = CyclotomicRational(1);
    std::int64_t trunc = 0;
    std::vector<CyclotomicRational> coeffs;  // index 0 unused

    const CyclotomicRational& A(std::int64_t n) const {
        if (n < 1 || n > trunc)
            throw std::out_of_range("LiftedForm::A: index " + std::to_string(n) +
                                    " outside [1, " + std::to_string(trunc) + "]");
        return coeffs[static_cast<std::size_t>(n)];
    }

    int k() const { return weight2k / 2; }
};

// ---------------------------------------------------------------------------
// the lift: A_t(n) = sum over d | n of chi_{t,N}(d) d^{k-1} a(t (n/d)^2)
// ---------------------------------------------------------------------------

inline LiftedForm lift(const halfint::HalfIntegralForm& f, std::int64_t t, std::int64_t T) {
    if (T < 1) throw std::domain_error("lift: truncation must be >= 1");
    if (t < 1 || !arith::is_squarefree(t))
        throw std::domain_error("lift: t must be a squarefree positive integer");
    if (t > f.trunc || f.a(t).is_zero())
        throw std::domain_error("lift: a(t) must be nonzero at t = " + std::to_string(t));
    if (f.trunc < t * T * T)
        throw std::out_of_range("lift: source truncation " + std::to_string(f.trunc) +
                                " misses index " + std::to_string(t * T * T) +
                                " needed for T = " + std::to_string(T));

    LiftedForm out;
    out.weight2k = 2 * f.k;
    out.level = f.level / 2;
    out.character = f.nebentypus.squared();
    out.t = t;
    out.a_t = f.a(t);
    out.trunc = T;
    out.coeffs.assign(static_cast<std::size_t>(T) + 1, CyclotomicRational());

    for (std::int64_t n = 1; n <= T; ++n) {
        CyclotomicRational acc;
        for (std::int64_t d : arith::divisors(n)) {
            CyclotomicRational c = chi_tN(d, f.nebentypus, t, f.level, f.k);
            if (c.is_zero()) continue;
            std::int64_t m = n / d;
            acc = acc + c * f.a(t * m * m) * Rat(arith::int_pow(d, f.k - 1));
        }
        out.coeffs[static_cast<std::size_t>(n)] = std::move(acc);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Mobius inversion of the lift:
//   a(t n^2) = sum over d | n of mu(d) chi_{t,N}(d) d^{k-1} A(n/d)
// Returns the table indexed 0..T with slot 0 unused.
// ---------------------------------------------------------------------------

inline std::vector<CyclotomicRational> invert_lift(const LiftedForm& A,
                                                   const DirichletCharacter& chi, std::int64_t N,
                                                   int k, std::int64_t T) {
    if (T < 1) throw std::domain_error("invert_lift: truncation must be >= 1");
    if (A.trunc < T)
        throw std::out_of_range("invert_lift: lifted table covers " + std::to_string(A.trunc) +
                                " < T = " + std::to_string(T));
    std::vector<CyclotomicRational> out(static_cast<std::size_t>(T) + 1, CyclotomicRational());
    for (std::int64_t n = 1; n <= T; ++n) {
        CyclotomicRational acc;
        for (std::int64_t d : arith::divisors(n)) {
            int mu = arith::mobius(d);
            if (mu == 0) continue;
            CyclotomicRational c = chi_tN(d, chi, A.t, N, k);
            if (c.is_zero()) continue;
            acc = acc + c * A.A(n / d) * (Rat(arith::int_pow(d, k - 1)) * mu);
        }
        out[static_cast<std::size_t>(n)] = std::move(acc);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Delta as a lifted form: the weight-12 level-1 eigenform whose coefficient
// table is tau.  This instantiates the concrete experiment with
// (N, t, k, chi) = (4, 1, 6, principal); tau itself is a level-1 form, so the
// stored character is principal mod 1 and every prime participates in the
// integral Hecke relation.
// ---------------------------------------------------------------------------

inline LiftedForm delta_lifted(const qseries::QSeries& delta_series) {
    LiftedForm out;
    out.weight2k = 12;
    out.level = 1;
    out.character = chars::principal(1);
    out.t = 1;
    out.a_t = CyclotomicRational(1);
    out.trunc = delta_series.max_exponent();
    out.coeffs.assign(static_cast<std::size_t>(out.trunc) + 1, CyclotomicRational());
    for (std::int64_t n = 1; n <= out.trunc; ++n)
        out.coeffs[static_cast<std::size_t>(n)] =
            CyclotomicRational(qseries::tau(delta_series, n));
    return out;
}

// ---------------------------------------------------------------------------
// normalized eigenvalues B_t(p) = A(p) / (2 a(t) p^{(2k-1)/2} chi(p))
// ---------------------------------------------------------------------------

// Exact ratio A(p) / (a(t) chi(p)); real when the reality lemma holds.
inline CyclotomicRational bt_ratio(const LiftedForm& A, std::int64_t p,
                                   const DirichletCharacter& chi) {
    auto chi_p = chi(p);
    if (!chi_p)
        throw std::domain_error("bt: p = " + std::to_string(p) +
                                " shares a factor with the character modulus");
    CyclotomicRational v = A.A(p) / A.a_t;
    if (!chi_p->is_one()) v = v * CyclotomicRational::from_root(chi_p->inverse());
    return v;
}

inline double bt(const LiftedForm& A, std::int64_t p, const DirichletCharacter& chi, int k) {
    CyclotomicRational w = bt_ratio(A, p, chi);
    if (!w.is_real())
        throw reality_violation(p, "bt: A(p)/(a(t) chi(p)) is not real at p = " +
                                       std::to_string(p));
    // Ramanujan-Petersson: w^2 <= 4 p^{2k-1}, checked exactly.
    Int bound = 4 * arith::int_pow(p, 2 * k - 1);
    CyclotomicRational excess = w * w - CyclotomicRational(bound);
    if (excess.sign_real() > 0)
        throw rp_violation(p, "bt: |A(p)/a(t)| exceeds 2 p^{(2k-1)/2} at p = " +
                                  std::to_string(p));
    // B = w / (2 p^{k-1} sqrt(p)); divide by the integer part exactly first so
    // the double conversion happens on a value of order 1.
    double base;
    if (w.is_rational()) {
        Rat r = w.as_rational() / (2 * Rat(arith::int_pow(p, k - 1)));
        base = r.convert_to<double>();
    } else {
        base = w.to_complex().real() /
               (2.0 * Int(arith::int_pow(p, k - 1)).convert_to<double>());
    }
    double value = base / std::sqrt(static_cast<double>(p));
    // The exact bound certified above can still round a hair outside [-1,1].
    if (value > 1.0) value = 1.0;
    if (value < -1.0) value = -1.0;
    return value;
}

struct NormalizedEigenvalues {
    std::int64_t x_max = 0;
    std::int64_t char_modulus = 1;
    std::vector<std::pair<std::int64_t, double>> table;  // (p, B(p)) ascending
};

inline NormalizedEigenvalues normalized_eigenvalues(const LiftedForm& A,
                                                    const DirichletCharacter& chi, int k,
                                                    std::int64_t x_max) {
    if (x_max < 2) throw std::domain_error("normalized_eigenvalues: x_max must be >= 2");
    if (x_max > A.trunc)
        throw std::out_of_range("normalized_eigenvalues: table covers " +
                                std::to_string(A.trunc) + " < x_max");
    NormalizedEigenvalues out;
    out.x_max = x_max;
    out.char_modulus = chi.modulus();
    auto primes = arith::sieve_primes(x_max);
    out.table.reserve(primes.primes.size());
    for (std::int64_t p : primes.primes) {
        if (chi.modulus() % p == 0) continue;  // p | N: excluded
        out.table.emplace_back(p, bt(A, p, chi, k));
    }
    return out;
}

// ---------------------------------------------------------------------------
// integral Hecke relation: A(p) A(n) / a(t) = A(pn) + chi^2(p) p^{2k-1} A(n/p)
// ---------------------------------------------------------------------------

struct EigencheckReport {
    bool ok = true;
    std::int64_t p = 0;  // first violation, when !ok
    std::int64_t n = 0;
};

inline EigencheckReport integral_eigencheck(const LiftedForm& A,
                                            const std::vector<std::int64_t>& primes,
                                            std::int64_t n_max) {
    const int k = A.k();
    for (std::int64_t p : primes) {
        if (A.level % p == 0)
            throw std::domain_error("integral_eigencheck: p = " + std::to_string(p) +
                                    " divides the level");
        CyclotomicRational chi2_p = A.character.value(p);
        Rat pk(arith::int_pow(p, 2 * k - 1));
        for (std::int64_t n = 1; n <= n_max && p * n <= A.trunc; ++n) {
            CyclotomicRational lhs = A.A(p) * A.A(n);
            CyclotomicRational rhs = A.A(p * n);
            if (n % p == 0) rhs = rhs + chi2_p * A.A(n / p) * pk;
            if (lhs != rhs * A.a_t) return {false, p, n};
        }
    }
    return {};
}

// ---------------------------------------------------------------------------
// synthetic Hecke-multiplicative generator (test oracle).  Integer A(p) drawn
// inside the Ramanujan-Petersson bound, extended by the prime-power recurrence
// and coprime multiplicativity.  Deterministic per seed; independent of any
// platform distribution implementation.
// ---------------------------------------------------------------------------

enum class EigenvalueMode { integer_uniform, sato_tate_rounded };

inline LiftedForm synth_hecke_form(int k, std::uint64_t seed, std::int64_t T,
                                   EigenvalueMode mode) {
    if (T < 1) throw std::domain_error("synth_hecke_form: T must be >= 1");
    if (k < 2) throw std::domain_error("synth_hecke_form: k must be >= 2");

    LiftedForm out;
    out.weight2k = 2 * k;
    out.level = 1;
    out.character = chars::principal(1);
    out.t = 1;
    out.a_t = CyclotomicRational(1);
    out.trunc = T;

    std::vector<Int> A(static_cast<std::size_t>(T) + 1, Int(0));
    A[0] = 0;
    if (T >= 1) A[1] = 1;

    std::mt19937_64 gen(seed);

    // smallest prime factor sieve drives the multiplicative fill
    std::vector<std::int32_t> spf(static_cast<std::size_t>(T) + 1, 0);
    for (std::int64_t i = 2; i <= T; ++i) {
        if (spf[static_cast<std::size_t>(i)] != 0) continue;
        for (std::int64_t j = i; j <= T; j += i)
            if (spf[static_cast<std::size_t>(j)] == 0)
                spf[static_cast<std::size_t>(j)] = static_cast<std::int32_t>(i);
    }

    for (std::int64_t p = 2; p <= T; ++p) {
        if (spf[static_cast<std::size_t>(p)] != p) continue;
        // M = floor(2 p^{(2k-1)/2}) = isqrt(4 p^{2k-1})
        Int M = arith::isqrt(4 * arith::int_pow(p, 2 * k - 1));
        Int ap;
        if (mode == EigenvalueMode::integer_uniform) {
            ap = rng::uniform_int(gen, 2 * M + 1) - M;
        } else {
            double x = rng::semicircle(gen);
            // exact scaled rounding: (round(|x| * 2^53) * M) >> 53 keeps |ap| <= M
            auto scaled = static_cast<std::int64_t>(std::llround(x * 9007199254740992.0));
            bool neg = scaled < 0;
            ap = (Int(neg ? -scaled : scaled) * M) >> 53;
            if (ap > M) ap = M;
            if (neg) ap = -ap;
        }
        if (p <= T) A[static_cast<std::size_t>(p)] = ap;
        // prime powers by the recurrence
        Int p2k1 = arith::int_pow(p, 2 * k - 1);
        Int prev = 1, cur = ap;
        for (Int q = Int(p) * p; q <= T; q *= p) {
            Int next = ap * cur - p2k1 * prev;
            A[static_cast<std::size_t>(q.convert_to<std::int64_t>())] = next;
            prev = cur;
            cur = next;
        }
    }
    // composite fill: n = p^e * m with gcd(p, m) = 1
    for (std::int64_t n = 2; n <= T; ++n) {
        std::int64_t p = spf[static_cast<std::size_t>(n)];
        std::int64_t pe = 1, m = n;
        while (m % p == 0) { m /= p; pe *= p; }
        if (m == 1) continue;  // prime power, already set
        A[static_cast<std::size_t>(n)] =
            A[static_cast<std::size_t>(pe)] * A[static_cast<std::size_t>(m)];
    }

    out.coeffs.assign(static_cast<std::size_t>(T) + 1, CyclotomicRational());
    for (std::int64_t n = 1; n <= T; ++n)
        out.coeffs[static_cast<std::size_t>(n)] = CyclotomicRational(A[static_cast<std::size_t>(n)]);
    return out;
}

// ---------------------------------------------------------------------------
// sign criterion: a(t p^2)/chi(p) > 0 is equivalent to
// B_t(p) > chi_1(p) / (2 sqrt p) with chi_1 = ((-1)^k N^2 t | .).
// Both sides are evaluated independently in exact arithmetic.
// ---------------------------------------------------------------------------

struct SignCriterionReport {
    std::int64_t checked = 0;
    std::vector<std::int64_t> mismatches;
};

inline SignCriterionReport sign_criterion_check(const LiftedForm& A,
                                                const std::vector<CyclotomicRational>& a_tnn,
                                                const DirichletCharacter& chi, std::int64_t N,
                                                int k, const std::vector<std::int64_t>& primes) {
    SignCriterionReport rep;
    for (std::int64_t p : primes) {
        if (N % p == 0) continue;
        if (p >= static_cast<std::int64_t>(a_tnn.size())) break;
        auto chi_p = chi(p);
        // left side: sign of a(t p^2) / chi(p)
        CyclotomicRational lhs_val = a_tnn[static_cast<std::size_t>(p)];
        if (!chi_p->is_one())
            lhs_val = lhs_val * CyclotomicRational::from_root(chi_p->inverse());
        bool lhs = lhs_val.sign_real() > 0;
        // right side: B(p) > chi_1(p)/(2 sqrt p), scaled to the exact form
        // A(p)/(a_t chi(p)) > chi_1(p) p^{k-1}
        Int arg = Int(N) * N * A.t;
        if (k % 2 != 0) arg = -arg;
        int chi1 = arith::kronecker(arg, Int(p));
        CyclotomicRational w = bt_ratio(A, p, chi);
        CyclotomicRational diff = w - CyclotomicRational(Int(chi1) * arith::int_pow(p, k - 1));
        bool rhs = diff.sign_real() > 0;
        ++rep.checked;
        if (lhs != rhs) rep.mismatches.push_back(p);
    }
    return rep;
}

} // namespace shimura
} // namespace mfsign
