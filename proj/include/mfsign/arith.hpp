#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/cpp_int/literals.hpp>

namespace mfsign {

// Exact arbitrary-precision integer and rational types used throughout.
using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

namespace arith {

// ---------------------------------------------------------------------------
// primes
// ---------------------------------------------------------------------------

struct PrimeTable {
    std::int64_t limit = 0;                // primes cover [2, limit]
    std::vector<std::int64_t> primes;

    bool contains(std::int64_t p) const {
        return std::binary_search(primes.begin(), primes.end(), p);
    }

    // pi(x) for x <= limit.
    std::int64_t count_upto(std::int64_t x) const {
        if (x > limit) throw std::domain_error("PrimeTable::count_upto: x beyond sieve limit");
        return static_cast<std::int64_t>(
            std::upper_bound(primes.begin(), primes.end(), x) - primes.begin());
    }
};

inline PrimeTable sieve_primes(std::int64_t limit) {
    if (limit < 2) throw std::domain_error("sieve_primes: limit must be >= 2");
    std::vector<bool> composite(static_cast<std::size_t>(limit) + 1, false);
    PrimeTable table;
    table.limit = limit;
    for (std::int64_t p = 2; p <= limit; ++p) {
        if (composite[static_cast<std::size_t>(p)]) continue;
        table.primes.push_back(p);
        for (std::int64_t m = p * p; m <= limit; m += p)
            composite[static_cast<std::size_t>(m)] = true;
    }
    return table;
}

// ---------------------------------------------------------------------------
// 64-bit modular helpers (unsigned, via 128-bit intermediates)
// ---------------------------------------------------------------------------

namespace detail {

inline std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

inline std::uint64_t powmod_u64(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
    if (m == 1) return 0;
    std::uint64_t result = 1;
    base %= m;
    while (exp > 0) {
        if (exp & 1) result = mulmod_u64(result, base, m);
        base = mulmod_u64(base, base, m);
        exp >>= 1;
    }
    return result;
}

} // namespace detail

// Deterministic Miller-Rabin, valid for all n < 2^63.
inline bool is_prime(std::int64_t n) {
    if (n < 2) return false;
    for (std::int64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (n == p) return true;
        if (n % p == 0) return false;
    }
    const std::uint64_t u = static_cast<std::uint64_t>(n);
    std::uint64_t d = u - 1;
    int r = 0;
    while ((d & 1) == 0) { d >>= 1; ++r; }
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        std::uint64_t x = detail::powmod_u64(a, d, u);
        if (x == 1 || x == u - 1) continue;
        bool witness = true;
        for (int i = 1; i < r; ++i) {
            x = detail::mulmod_u64(x, x, u);
            if (x == u - 1) { witness = false; break; }
        }
        if (witness) return false;
    }
    return true;
}

namespace detail {

// Brent's cycle-finding variant of Pollard rho.  Deterministic seed sweep;
// only reached for composites with no factor below the trial-division bound.
inline std::int64_t pollard_brent(std::int64_t n) {
    const std::uint64_t un = static_cast<std::uint64_t>(n);
    for (std::uint64_t c = 1;; ++c) {
        std::uint64_t x = 2, y = 2, d = 1;
        std::uint64_t saved = 0;
        int power = 1, lam = 1;
        auto step = [&](std::uint64_t v) { return (mulmod_u64(v, v, un) + c) % un; };
        y = step(x);
        while (d == 1) {
            if (power == lam) { x = y; power *= 2; lam = 0; }
            saved = y;
            std::uint64_t prod = 1;
            const int batch = 64;
            int i = 0;
            for (; i < batch && lam < power; ++i, ++lam) {
                y = step(y);
                std::uint64_t diff = x > y ? x - y : y - x;
                if (diff == 0) { d = un; break; }
                prod = mulmod_u64(prod, diff, un);
            }
            if (d == un) break;
            d = std::gcd(prod, un);
        }
        if (d == un) {
            // Batch gcd collapsed; replay one step at a time from the saved point.
            std::uint64_t y2 = saved;
            d = 1;
            while (d == 1) {
                y2 = step(y2);
                std::uint64_t diff = x > y2 ? x - y2 : y2 - x;
                if (diff == 0) { d = un; break; }
                d = std::gcd(diff, un);
            }
        }
        if (d != un && d != 1) return static_cast<std::int64_t>(d);
        // Cycle degenerated for this c; try the next increment.
    }
}

} // namespace detail

// ---------------------------------------------------------------------------
// factorization
// ---------------------------------------------------------------------------

struct Factorization {
    std::int64_t n = 1;
    std::vector<std::pair<std::int64_t, int>> factors;  // (prime, exponent), ascending primes
};

inline Factorization factorize(std::int64_t n) {
    if (n <= 0) throw std::domain_error("factorize: n must be positive");
    Factorization out;
    out.n = n;
    std::int64_t m = n;
    auto take = [&](std::int64_t p) {
        int e = 0;
        while (m % p == 0) { m /= p; ++e; }
        if (e > 0) out.factors.emplace_back(p, e);
    };
    take(2);
    take(3);
    // Trial division up to 10^6 (cheap for small n because of the d*d <= m cut),
    // then Miller-Rabin plus rho for any large leftover cofactor.
    constexpr std::int64_t trial_bound = 1000000;
    for (std::int64_t d = 5; d <= trial_bound && d * d <= m; d += 6) {
        take(d);
        take(d + 2);
    }
    if (m > 1) {
        std::vector<std::int64_t> stack{m};
        std::vector<std::int64_t> primes_left;
        while (!stack.empty()) {
            std::int64_t v = stack.back();
            stack.pop_back();
            if (v == 1) continue;
            if (is_prime(v)) { primes_left.push_back(v); continue; }
            std::int64_t d = detail::pollard_brent(v);
            stack.push_back(d);
            stack.push_back(v / d);
        }
        std::sort(primes_left.begin(), primes_left.end());
        for (std::size_t i = 0; i < primes_left.size();) {
            std::size_t j = i;
            while (j < primes_left.size() && primes_left[j] == primes_left[i]) ++j;
            out.factors.emplace_back(primes_left[i], static_cast<int>(j - i));
            i = j;
        }
        std::sort(out.factors.begin(), out.factors.end());
    }
    return out;
}

inline int mobius(std::int64_t n) {
    if (n <= 0) throw std::domain_error("mobius: n must be positive");
    auto f = factorize(n);
    for (auto& [p, e] : f.factors)
        if (e > 1) return 0;
    return (f.factors.size() % 2 == 0) ? 1 : -1;
}

inline std::int64_t euler_phi(std::int64_t n) {
    if (n <= 0) throw std::domain_error("euler_phi: n must be positive");
    std::int64_t phi = 1;
    for (auto& [p, e] : factorize(n).factors) {
        phi *= p - 1;
        for (int i = 1; i < e; ++i) phi *= p;
    }
    return phi;
}

inline bool is_squarefree(std::int64_t n) {
    if (n <= 0) throw std::domain_error("is_squarefree: n must be positive");
    return mobius(n) != 0;
}

// All positive divisors of n, ascending.
inline std::vector<std::int64_t> divisors(std::int64_t n) {
    auto f = factorize(n);
    std::vector<std::int64_t> divs{1};
    for (auto& [p, e] : f.factors) {
        std::size_t base = divs.size();
        std::int64_t pk = 1;
        for (int i = 1; i <= e; ++i) {
            pk *= p;
            for (std::size_t j = 0; j < base; ++j) divs.push_back(divs[j] * pk);
        }
    }
    std::sort(divs.begin(), divs.end());
    return divs;
}

// ---------------------------------------------------------------------------
// Kronecker symbol (a|n), full extension to all integer pairs
// ---------------------------------------------------------------------------

inline int kronecker(Int a, Int n) {
    if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
    int result = 1;
    if (n < 0) {
        n = -n;
        if (a < 0) result = -result;
    }
    if ((n & 1) == 0) {
        if ((a & 1) == 0) return 0;
        int e = 0;
        while ((n & 1) == 0) { n >>= 1; ++e; }
        if (e & 1) {
            int am8 = static_cast<int>(a % 8);
            if (am8 < 0) am8 += 8;
            if (am8 == 3 || am8 == 5) result = -result;
        }
    }
    // n is now odd and positive: Jacobi symbol with quadratic reciprocity.
    a %= n;
    if (a < 0) a += n;
    while (a != 0) {
        while ((a & 1) == 0) {
            a >>= 1;
            int nm8 = static_cast<int>(n % 8);
            if (nm8 == 3 || nm8 == 5) result = -result;
        }
        std::swap(a, n);
        if (static_cast<int>(a % 4) == 3 && static_cast<int>(n % 4) == 3) result = -result;
        a %= n;
    }
    return (n == 1) ? result : 0;
}

inline int kronecker(std::int64_t a, std::int64_t n) {
    return kronecker(Int(a), Int(n));
}

// ---------------------------------------------------------------------------
// misc exact helpers
// ---------------------------------------------------------------------------

inline Int int_pow(Int base, std::int64_t exp) {
    if (exp < 0) throw std::domain_error("int_pow: negative exponent");
    Int result = 1;
    while (exp > 0) {
        if (exp & 1) result *= base;
        base *= base;
        exp >>= 1;
    }
    return result;
}

inline Int int_pow(std::int64_t base, std::int64_t exp) { return int_pow(Int(base), exp); }

// floor(sqrt(n)) for n >= 0, exact.
inline Int isqrt(const Int& n) {
    if (n < 0) throw std::domain_error("isqrt: negative argument");
    return boost::multiprecision::sqrt(n);
}

inline int sign_of(const Int& v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }
inline int sign_of(const Rat& v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

// Canonical decimal text for exact rationals: "p" or "p/q" with q > 1.
inline std::string rat_to_string(const Rat& r) {
    Int num = boost::multiprecision::numerator(r);
    Int den = boost::multiprecision::denominator(r);
    std::string s = num.str();
    if (den != 1) s += "/" + den.str();
    return s;
}

inline Rat rat_from_string(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rat(Int(s));
        Int num(s.substr(0, slash));
        Int den(s.substr(slash + 1));
        if (den == 0) throw std::domain_error("rat_from_string: zero denominator");
        return Rat(num) / Rat(den);
    } catch (const std::domain_error&) {
        throw;
    } catch (const std::exception&) {
        throw std::domain_error("rat_from_string: cannot parse '" + s + "'");
    }
}

} // namespace arith
} // namespace mfsign
