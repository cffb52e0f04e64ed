#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "mfsign/arith.hpp"
#include "mfsign/errors.hpp"

namespace mfsign {
namespace cyclo {

// ---------------------------------------------------------------------------
// RootOfUnity: e^{2 pi i j / m} in lowest terms (order is the exact
// multiplicative order; exponent coprime to it).
// ---------------------------------------------------------------------------

class RootOfUnity {
public:
    RootOfUnity() = default;  // the value 1

    RootOfUnity(std::int64_t order, std::int64_t exponent) {
        if (order < 1) throw std::domain_error("RootOfUnity: order must be positive");
        exponent %= order;
        if (exponent < 0) exponent += order;
        std::int64_t g = std::gcd(exponent, order);  // gcd(0, m) = m
        ord_ = order / g;
        exp_ = (ord_ == 1) ? 0 : exponent / g;
    }

    static RootOfUnity one() { return {}; }
    static RootOfUnity minus_one() { return {2, 1}; }

    std::int64_t order() const { return ord_; }
    std::int64_t exponent() const { return exp_; }

    bool is_one() const { return ord_ == 1; }
    bool is_minus_one() const { return ord_ == 2; }
    bool is_real() const { return ord_ <= 2; }

    // +1 or -1; only meaningful for real roots.
    int real_sign() const {
        if (!is_real()) throw std::domain_error("RootOfUnity::real_sign: value is not real");
        return ord_ == 1 ? 1 : -1;
    }

    friend RootOfUnity operator*(const RootOfUnity& a, const RootOfUnity& b) {
        std::int64_t L = std::lcm(a.ord_, b.ord_);
        // Exponent arithmetic stays far below 2^63 for all orders in use,
        // but go through 128 bits to be safe.
        __int128 e = static_cast<__int128>(a.exp_) * (L / a.ord_) +
                     static_cast<__int128>(b.exp_) * (L / b.ord_);
        return RootOfUnity(L, static_cast<std::int64_t>(e % L));
    }

    RootOfUnity pow(std::int64_t e) const {
        std::int64_t r = e % ord_;
        if (r < 0) r += ord_;
        __int128 prod = static_cast<__int128>(exp_) * r;
        return RootOfUnity(ord_, static_cast<std::int64_t>(prod % ord_));
    }

    RootOfUnity inverse() const { return RootOfUnity(ord_, ord_ - exp_); }
    RootOfUnity conj() const { return inverse(); }

    friend bool operator==(const RootOfUnity& a, const RootOfUnity& b) {
        return a.ord_ == b.ord_ && a.exp_ == b.exp_;
    }
    friend bool operator!=(const RootOfUnity& a, const RootOfUnity& b) { return !(a == b); }
    friend bool operator<(const RootOfUnity& a, const RootOfUnity& b) {
        return a.ord_ != b.ord_ ? a.ord_ < b.ord_ : a.exp_ < b.exp_;
    }

    std::complex<double> to_complex() const {
        double theta = 2.0 * 3.14159265358979323846 *
                       static_cast<double>(exp_) / static_cast<double>(ord_);
        return {std::cos(theta), std::sin(theta)};
    }

    // Canonical text form "order:exponent", e.g. "4:1" for i.
    std::string label() const {
        return std::to_string(ord_) + ":" + std::to_string(exp_);
    }

    static RootOfUnity parse(const std::string& s) {
        auto colon = s.find(':');
        if (colon == std::string::npos)
            throw std::domain_error("RootOfUnity::parse: expected 'order:exponent', got '" + s + "'");
        try {
            std::int64_t m = std::stoll(s.substr(0, colon));
            std::int64_t j = std::stoll(s.substr(colon + 1));
            return RootOfUnity(m, j);
        } catch (const std::domain_error&) {
            throw;
        } catch (const std::exception&) {
            throw std::domain_error("RootOfUnity::parse: cannot parse '" + s + "'");
        }
    }

private:
    std::int64_t ord_ = 1;
    std::int64_t exp_ = 0;
};

// ---------------------------------------------------------------------------
// internal polynomial helpers (dense, ascending degree)
// ---------------------------------------------------------------------------

namespace poly {

// Exact division of an integer polynomial by a monic integer polynomial;
// remainder must vanish (used only for cyclotomic polynomial construction).
inline std::vector<Int> divide_exact(std::vector<Int> num, const std::vector<Int>& den) {
    std::size_t dn = num.size() - 1, dd = den.size() - 1;
    if (dn < dd) throw std::logic_error("poly::divide_exact: degree underflow");
    std::vector<Int> quot(dn - dd + 1);
    for (std::size_t i = dn + 1; i-- > dd;) {
        Int c = num[i];
        quot[i - dd] = c;
        if (c == 0) continue;
        for (std::size_t j = 0; j <= dd; ++j) num[i - dd + j] -= c * den[j];
    }
    for (const Int& c : num)
        if (c != 0) throw std::logic_error("poly::divide_exact: nonzero remainder");
    return quot;
}

// m-th cyclotomic polynomial, by dividing x^m - 1 by all smaller-index ones.
inline const std::vector<Int>& cyclotomic(std::int64_t m) {
    static std::map<std::int64_t, std::vector<Int>> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(m);
    if (it != cache.end()) return it->second;

    // Compute iteratively for every divisor of m not yet cached.
    for (std::int64_t d : arith::divisors(m)) {
        if (cache.count(d)) continue;
        std::vector<Int> num(static_cast<std::size_t>(d) + 1);
        num[0] = -1;
        num[static_cast<std::size_t>(d)] = 1;  // x^d - 1
        std::vector<Int> result = num;
        for (std::int64_t e : arith::divisors(d)) {
            if (e == d) continue;
            result = divide_exact(std::move(result), cache.at(e));
        }
        cache.emplace(d, std::move(result));
    }
    return cache.at(m);
}

// Reduce a rational polynomial modulo the monic integer polynomial phi,
// in place; result has degree < deg phi.
inline void reduce_mod(std::vector<Rat>& v, const std::vector<Int>& phi) {
    std::size_t dd = phi.size() - 1;
    if (v.size() <= dd) {
        v.resize(dd, Rat(0));
        return;
    }
    for (std::size_t i = v.size(); i-- > dd;) {
        Rat c = v[i];
        if (c == 0) continue;
        v[i] = 0;
        for (std::size_t j = 0; j < dd; ++j) v[i - dd + j] -= c * Rat(phi[j]);
    }
    v.resize(dd);
}

// Extended gcd over Q[x]: returns (g, u) with u*a = g (mod phi) and g the
// monic gcd of a and phi.  phi irreducible and a nonzero give g = 1.
inline std::pair<std::vector<Rat>, std::vector<Rat>> xgcd_mod(
    std::vector<Rat> a, const std::vector<Int>& phi) {
    auto trim = [](std::vector<Rat>& p) {
        while (!p.empty() && p.back() == 0) p.pop_back();
    };
    std::vector<Rat> r0(phi.begin(), phi.end());
    std::vector<Rat> r1 = std::move(a);
    trim(r0);
    trim(r1);
    std::vector<Rat> u0{}, u1{Rat(1)};  // coefficients of `a` in r0, r1
    while (!r1.empty()) {
        // r0 = q*r1 + r2
        std::vector<Rat> q;
        std::vector<Rat> r2 = r0;
        if (r2.size() >= r1.size()) {
            q.assign(r2.size() - r1.size() + 1, Rat(0));
            for (std::size_t i = r2.size(); i-- > r1.size() - 1;) {
                Rat c = r2[i] / r1.back();
                std::size_t shift = i - (r1.size() - 1);
                q[shift] = c;
                if (c == 0) continue;
                for (std::size_t j = 0; j < r1.size(); ++j) r2[shift + j] -= c * r1[j];
            }
        }
        trim(r2);
        // u2 = u0 - q*u1
        std::vector<Rat> u2 = u0;
        if (!q.empty() && !u1.empty()) {
            u2.resize(std::max(u2.size(), q.size() + u1.size() - 1), Rat(0));
            for (std::size_t i = 0; i < q.size(); ++i) {
                if (q[i] == 0) continue;
                for (std::size_t j = 0; j < u1.size(); ++j) u2[i + j] -= q[i] * u1[j];
            }
        }
        trim(u2);
        r0 = std::move(r1);
        r1 = std::move(r2);
        u0 = std::move(u1);
        u1 = std::move(u2);
    }
    if (r0.empty()) throw std::logic_error("poly::xgcd_mod: zero gcd");
    // Normalize gcd to monic.
    Rat lead = r0.back();
    for (auto& c : r0) c /= lead;
    for (auto& c : u0) c /= lead;
    return {std::move(r0), std::move(u0)};
}

} // namespace poly

// ---------------------------------------------------------------------------
// CyclotomicRational: exact element of Q(zeta_m) in the power basis
// 1, zeta, ..., zeta^{phi(m)-1}.  Operations between different orders lift
// to the least common order.
// ---------------------------------------------------------------------------

class CyclotomicRational {
public:
    CyclotomicRational() : order_(1), c_(1, Rat(0)) {}

    explicit CyclotomicRational(const Rat& r) : order_(1), c_(1, r) {}
    explicit CyclotomicRational(const Int& n) : order_(1), c_(1, Rat(n)) {}
    explicit CyclotomicRational(std::int64_t n) : order_(1), c_(1, Rat(n)) {}

    static CyclotomicRational from_root(const RootOfUnity& z) {
        CyclotomicRational out;
        out.order_ = z.order();
        std::vector<Rat> v(static_cast<std::size_t>(z.exponent()) + 1, Rat(0));
        v[static_cast<std::size_t>(z.exponent())] = 1;
        poly::reduce_mod(v, poly::cyclotomic(out.order_));
        out.c_ = std::move(v);
        return out;
    }

    // Value sum_i raw[i] * zeta_order^i, reduced into the power basis.
    static CyclotomicRational from_coefficients(std::int64_t order, std::vector<Rat> raw) {
        if (order < 1) throw std::domain_error("from_coefficients: order must be positive");
        if (raw.empty()) raw.assign(1, Rat(0));
        CyclotomicRational out;
        out.order_ = order;
        poly::reduce_mod(raw, poly::cyclotomic(order));
        out.c_ = std::move(raw);
        return out;
    }

    std::int64_t order() const { return order_; }
    const std::vector<Rat>& coords() const { return c_; }

    bool is_zero() const {
        for (const auto& c : c_)
            if (c != 0) return false;
        return true;
    }

    // Exact: the power basis contains 1, so a value is rational iff every
    // higher coordinate vanishes.
    bool is_rational() const {
        for (std::size_t i = 1; i < c_.size(); ++i)
            if (c_[i] != 0) return false;
        return true;
    }

    Rat as_rational() const {
        if (!is_rational())
            throw std::domain_error("CyclotomicRational::as_rational: value not rational");
        return c_[0];
    }

    CyclotomicRational conj() const {
        if (order_ <= 2) return *this;
        CyclotomicRational out;
        out.order_ = order_;
        std::vector<Rat> v(static_cast<std::size_t>(order_), Rat(0));
        v[0] = c_[0];
        for (std::size_t i = 1; i < c_.size(); ++i)
            v[static_cast<std::size_t>(order_) - i] += c_[i];
        poly::reduce_mod(v, poly::cyclotomic(order_));
        out.c_ = std::move(v);
        return out;
    }

    bool is_real() const { return conj() == *this; }

    CyclotomicRational lifted_to(std::int64_t m) const {
        if (m == order_) return *this;
        if (m % order_ != 0)
            throw std::domain_error("CyclotomicRational::lifted_to: target order not a multiple");
        std::int64_t s = m / order_;
        CyclotomicRational out;
        out.order_ = m;
        std::vector<Rat> v(static_cast<std::size_t>((c_.size() - 1) * s) + 1, Rat(0));
        for (std::size_t i = 0; i < c_.size(); ++i) v[i * s] = c_[i];
        poly::reduce_mod(v, poly::cyclotomic(m));
        out.c_ = std::move(v);
        return out;
    }

    friend CyclotomicRational operator+(const CyclotomicRational& a, const CyclotomicRational& b) {
        if (a.order_ != b.order_) return lift_pair_add(a, b, +1);
        CyclotomicRational out;
        out.order_ = a.order_;
        out.c_ = a.c_;
        for (std::size_t i = 0; i < b.c_.size(); ++i) out.c_[i] += b.c_[i];
        return out;
    }

    friend CyclotomicRational operator-(const CyclotomicRational& a, const CyclotomicRational& b) {
        if (a.order_ != b.order_) return lift_pair_add(a, b, -1);
        CyclotomicRational out;
        out.order_ = a.order_;
        out.c_ = a.c_;
        for (std::size_t i = 0; i < b.c_.size(); ++i) out.c_[i] -= b.c_[i];
        return out;
    }

    CyclotomicRational operator-() const {
        CyclotomicRational out = *this;
        for (auto& c : out.c_) c = -c;
        return out;
    }

    friend CyclotomicRational operator*(const CyclotomicRational& a, const CyclotomicRational& b) {
        if (a.order_ != b.order_) {
            std::int64_t L = std::lcm(a.order_, b.order_);
            return a.lifted_to(L) * b.lifted_to(L);
        }
        CyclotomicRational out;
        out.order_ = a.order_;
        std::vector<Rat> v(a.c_.size() + b.c_.size() - 1, Rat(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (a.c_[i] == 0) continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j) {
                if (b.c_[j] == 0) continue;
                v[i + j] += a.c_[i] * b.c_[j];
            }
        }
        poly::reduce_mod(v, poly::cyclotomic(out.order_));
        out.c_ = std::move(v);
        return out;
    }

    friend CyclotomicRational operator*(const CyclotomicRational& a, const Rat& s) {
        CyclotomicRational out = a;
        for (auto& c : out.c_) c *= s;
        return out;
    }

    CyclotomicRational inverse() const {
        if (is_zero()) throw std::domain_error("CyclotomicRational::inverse: division by zero");
        if (is_rational()) return CyclotomicRational(Rat(1) / c_[0]);
        auto [g, u] = poly::xgcd_mod(std::vector<Rat>(c_.begin(), c_.end()),
                                     poly::cyclotomic(order_));
        if (g.size() != 1)
            throw std::logic_error("CyclotomicRational::inverse: non-constant gcd");
        CyclotomicRational out;
        out.order_ = order_;
        poly::reduce_mod(u, poly::cyclotomic(order_));
        out.c_ = std::move(u);
        return out;
    }

    friend CyclotomicRational operator/(const CyclotomicRational& a, const CyclotomicRational& b) {
        if (b.is_rational()) {
            if (b.c_[0] == 0) throw std::domain_error("CyclotomicRational: division by zero");
            return a * (Rat(1) / b.c_[0]);
        }
        return a * b.inverse();
    }

    friend bool operator==(const CyclotomicRational& a, const CyclotomicRational& b) {
        if (a.order_ == b.order_) return a.c_ == b.c_;
        std::int64_t L = std::lcm(a.order_, b.order_);
        return a.lifted_to(L).c_ == b.lifted_to(L).c_;
    }
    friend bool operator!=(const CyclotomicRational& a, const CyclotomicRational& b) {
        return !(a == b);
    }

    std::complex<double> to_complex() const {
        std::complex<double> acc{0.0, 0.0};
        const double two_pi = 2.0 * 3.14159265358979323846;
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (c_[i] == 0) continue;
            double theta = two_pi * static_cast<double>(i) / static_cast<double>(order_);
            acc += c_[i].convert_to<double>() * std::complex<double>{std::cos(theta), std::sin(theta)};
        }
        return acc;
    }

    // Sign of a totally real value: exact for rationals; otherwise decided by
    // a certified floating embedding at escalating precision, with exact zero
    // detection via coordinates.  Throws sign_undecidable rather than guess.
    int sign_real() const {
        if (is_zero()) return 0;
        if (is_rational()) return arith::sign_of(c_[0]);
        if (!is_real())
            throw reality_violation(0, "sign_real: value is not fixed by conjugation");
        if (int s = certified_sign<boost::multiprecision::cpp_bin_float_100>(); s != 0) return s;
        using big = boost::multiprecision::number<
            boost::multiprecision::cpp_bin_float<400>>;
        if (int s = certified_sign<big>(); s != 0) return s;
        throw sign_undecidable("sign_real: embedding magnitude below certification bound");
    }

    // Canonical text: plain rational when the value is rational, else
    // "[m:c0,c1,...]" with phi(m) rational coordinates.
    std::string to_string() const {
        if (is_rational()) return arith::rat_to_string(c_[0]);
        std::string s = "[" + std::to_string(order_) + ":";
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (i) s += ",";
            s += arith::rat_to_string(c_[i]);
        }
        s += "]";
        return s;
    }

    static CyclotomicRational parse(const std::string& s) {
        if (s.empty()) throw std::domain_error("CyclotomicRational::parse: empty string");
        if (s.front() != '[') return CyclotomicRational(arith::rat_from_string(s));
        if (s.back() != ']')
            throw std::domain_error("CyclotomicRational::parse: missing ']' in '" + s + "'");
        auto colon = s.find(':');
        if (colon == std::string::npos)
            throw std::domain_error("CyclotomicRational::parse: missing ':' in '" + s + "'");
        std::int64_t m = 0;
        try {
            m = std::stoll(s.substr(1, colon - 1));
        } catch (const std::exception&) {
            throw std::domain_error("CyclotomicRational::parse: bad order in '" + s + "'");
        }
        if (m < 1) throw std::domain_error("CyclotomicRational::parse: bad order in '" + s + "'");
        CyclotomicRational out;
        out.order_ = m;
        out.c_.clear();
        std::string body = s.substr(colon + 1, s.size() - colon - 2);
        std::stringstream ss(body);
        std::string tok;
        while (std::getline(ss, tok, ','))
            out.c_.push_back(arith::rat_from_string(tok));
        std::size_t want = poly::cyclotomic(m).size() - 1;
        if (out.c_.size() != want)
            throw std::domain_error("CyclotomicRational::parse: expected " + std::to_string(want) +
                                    " coordinates in '" + s + "'");
        return out;
    }

private:
    std::int64_t order_;
    std::vector<Rat> c_;

    static CyclotomicRational lift_pair_add(const CyclotomicRational& a,
                                            const CyclotomicRational& b, int sgn) {
        std::int64_t L = std::lcm(a.order_, b.order_);
        CyclotomicRational out = a.lifted_to(L);
        CyclotomicRational bb = b.lifted_to(L);
        for (std::size_t i = 0; i < bb.c_.size(); ++i) {
            if (sgn > 0)
                out.c_[i] += bb.c_[i];
            else
                out.c_[i] -= bb.c_[i];
        }
        return out;
    }

    template <typename Float>
    int certified_sign() const {
        const Float pi = boost::math::constants::pi<Float>();
        Float value = 0;
        Float abs_sum = 0;
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (c_[i] == 0) continue;
            Float coef(c_[i]);
            Float theta = 2 * pi * Float(static_cast<std::int64_t>(i)) / Float(order_);
            value += coef * cos(theta);
            abs_sum += abs(coef);
        }
        // Every term carries a handful of ulps of rounding; bound generously.
        Float bound = (abs_sum + 1) * std::numeric_limits<Float>::epsilon() *
                      Float(64 * static_cast<std::int64_t>(c_.size() + 2));
        if (value > bound) return 1;
        if (value < -bound) return -1;
        return 0;  // undecided at this precision
    }
};

// Convenience: the value chi * r with chi a root of unity embedded exactly.
inline CyclotomicRational root_times(const RootOfUnity& z, const Rat& r) {
    return CyclotomicRational::from_root(z) * r;
}

} // namespace cyclo
} // namespace mfsign
