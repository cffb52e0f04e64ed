#pragma once

#include <cstdint>
#include <memory>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mfsign/arith.hpp"
#include "mfsign/cyclotomic.hpp"

namespace mfsign {
namespace chars {

using cyclo::CyclotomicRational;
using cyclo::RootOfUnity;

namespace detail {

// One cyclic factor of (Z/q)^x under the CRT decomposition.  For odd prime
// powers this is the full unit group of p^e; the 2-power part (e >= 3) is
// split as <-1> x <5>.  `dlog` maps a residue mod `local_mod` to the discrete
// log with respect to `generator` within this factor (-1 for non-units).
struct CyclicFactor {
    std::int64_t local_mod;       // p^e (or 2^e)
    std::int64_t generator;       // residue mod q generating this factor
    std::int64_t order;
    std::vector<std::int32_t> dlog;
};

inline std::int64_t powmod_i64(std::int64_t base, std::int64_t exp, std::int64_t m) {
    return static_cast<std::int64_t>(
        arith::detail::powmod_u64(static_cast<std::uint64_t>(((base % m) + m) % m),
                                  static_cast<std::uint64_t>(exp),
                                  static_cast<std::uint64_t>(m)));
}

// Smallest primitive root modulo the odd prime power pk = p^e.
inline std::int64_t smallest_primitive_root(std::int64_t p, std::int64_t pk) {
    std::int64_t phi = pk / p * (p - 1);
    std::vector<std::int64_t> prime_factors;
    for (auto& [f, e] : arith::factorize(phi).factors) prime_factors.push_back(f);
    for (std::int64_t g = 2;; ++g) {
        if (g % p == 0) continue;
        bool primitive = true;
        for (std::int64_t f : prime_factors) {
            if (powmod_i64(g, phi / f, pk) == 1) { primitive = false; break; }
        }
        if (primitive) return g;
    }
}

struct GroupData {
    std::int64_t q = 1;
    std::int64_t phi = 1;
    std::int64_t exponent = 1;  // lcm of factor orders
    std::vector<CyclicFactor> factors;
};

// CRT: the residue mod q that is `r` mod `m` and 1 mod q/m (gcd(m, q/m)=1).
inline std::int64_t crt_embed(std::int64_t r, std::int64_t m, std::int64_t q) {
    std::int64_t rest = q / m;
    if (rest == 1) return r % q;
    // x = r + m*s with x == 1 (mod rest)
    for (std::int64_t s = 0; s < rest; ++s) {
        std::int64_t x = (r + m * s) % q;
        if (x % rest == 1 % rest) return x;
    }
    throw std::logic_error("crt_embed: no solution (moduli not coprime?)");
}

inline std::shared_ptr<const GroupData> build_group(std::int64_t q) {
    if (q < 1) throw std::domain_error("character_group: modulus must be positive");
    auto data = std::make_shared<GroupData>();
    data->q = q;
    data->phi = (q == 1) ? 1 : arith::euler_phi(q);
    for (auto& [p, e] : arith::factorize(q).factors) {
        std::int64_t pk = 1;
        for (int i = 0; i < e; ++i) pk *= p;
        if (p == 2) {
            if (e == 1) continue;  // unit group of Z/2 is trivial
            if (e == 2) {
                // <3> of order 2
                CyclicFactor f;
                f.local_mod = 4;
                f.generator = crt_embed(3, 4, q);
                f.order = 2;
                f.dlog.assign(4, -1);
                f.dlog[1] = 0;
                f.dlog[3] = 1;
                data->factors.push_back(std::move(f));
            } else {
                // <-1> x <5>; joint enumeration fills both tables
                CyclicFactor fs, ff;
                fs.local_mod = ff.local_mod = pk;
                fs.generator = crt_embed(pk - 1, pk, q);
                ff.generator = crt_embed(5, pk, q);
                fs.order = 2;
                ff.order = pk / 4;
                fs.dlog.assign(static_cast<std::size_t>(pk), -1);
                ff.dlog.assign(static_cast<std::size_t>(pk), -1);
                for (int s = 0; s < 2; ++s) {
                    std::int64_t base = (s == 0) ? 1 : pk - 1;
                    std::int64_t v = base;
                    for (std::int64_t t = 0; t < ff.order; ++t) {
                        fs.dlog[static_cast<std::size_t>(v)] = s;
                        ff.dlog[static_cast<std::size_t>(v)] = static_cast<std::int32_t>(t);
                        v = static_cast<std::int64_t>(
                            (static_cast<unsigned __int128>(v) * 5) % pk);
                    }
                }
                data->factors.push_back(std::move(fs));
                data->factors.push_back(std::move(ff));
            }
        } else {
            CyclicFactor f;
            f.local_mod = pk;
            std::int64_t g = smallest_primitive_root(p, pk);
            f.generator = crt_embed(g, pk, q);
            f.order = pk / p * (p - 1);
            f.dlog.assign(static_cast<std::size_t>(pk), -1);
            std::int64_t v = 1;
            for (std::int64_t i = 0; i < f.order; ++i) {
                f.dlog[static_cast<std::size_t>(v)] = static_cast<std::int32_t>(i);
                v = static_cast<std::int64_t>((static_cast<unsigned __int128>(v) * g) % pk);
            }
            data->factors.push_back(std::move(f));
        }
    }
    data->exponent = 1;
    for (auto& f : data->factors) data->exponent = std::lcm(data->exponent, f.order);
    return data;
}

} // namespace detail

// ---------------------------------------------------------------------------
// DirichletCharacter
// ---------------------------------------------------------------------------

class DirichletCharacter {
public:
    DirichletCharacter() : data_(detail::build_group(1)) {}

    DirichletCharacter(std::shared_ptr<const detail::GroupData> data,
                       std::vector<std::int64_t> exps)
        : data_(std::move(data)), exps_(std::move(exps)) {
        if (exps_.size() != data_->factors.size())
            throw std::domain_error("DirichletCharacter: exponent vector length mismatch");
        for (std::size_t i = 0; i < exps_.size(); ++i) {
            std::int64_t d = data_->factors[i].order;
            exps_[i] %= d;
            if (exps_[i] < 0) exps_[i] += d;
        }
    }

    std::int64_t modulus() const { return data_->q; }
    const std::vector<std::int64_t>& exponents() const { return exps_; }

    std::int64_t order() const {
        std::int64_t ord = 1;
        for (std::size_t i = 0; i < exps_.size(); ++i) {
            std::int64_t d = data_->factors[i].order;
            std::int64_t g = std::gcd(exps_[i], d);  // gcd(0,d)=d
            ord = std::lcm(ord, d / g);
        }
        return ord;
    }

    bool is_principal() const {
        for (auto e : exps_)
            if (e != 0) return false;
        return true;
    }

    // Value at n: nullopt encodes 0 (n not a unit), otherwise an exact root.
    std::optional<RootOfUnity> operator()(std::int64_t n) const {
        std::int64_t q = data_->q;
        std::int64_t r = n % q;
        if (r < 0) r += q;
        if (q == 1) return RootOfUnity::one();
        if (std::gcd(r, q) != 1) return std::nullopt;
        const std::int64_t L = data_->exponent;
        __int128 acc = 0;
        for (std::size_t i = 0; i < exps_.size(); ++i) {
            const auto& f = data_->factors[i];
            std::int32_t dl = f.dlog[static_cast<std::size_t>(r % f.local_mod)];
            if (dl < 0) throw std::logic_error("DirichletCharacter: dlog missing for unit");
            acc += static_cast<__int128>(exps_[i]) * dl % f.order * (L / f.order);
        }
        return RootOfUnity(L, static_cast<std::int64_t>(acc % L));
    }

    // Value embedded into cyclotomic arithmetic (0 for non-units).
    CyclotomicRational value(std::int64_t n) const {
        auto z = (*this)(n);
        if (!z) return CyclotomicRational();
        return CyclotomicRational::from_root(*z);
    }

    DirichletCharacter times(const DirichletCharacter& other) const {
        if (data_->q != other.data_->q)
            throw std::domain_error("DirichletCharacter::times: modulus mismatch");
        std::vector<std::int64_t> e(exps_);
        for (std::size_t i = 0; i < e.size(); ++i) e[i] += other.exps_[i];
        return DirichletCharacter(data_, std::move(e));
    }

    DirichletCharacter squared() const { return times(*this); }

    DirichletCharacter conj() const {
        std::vector<std::int64_t> e(exps_);
        for (auto& x : e) x = -x;
        return DirichletCharacter(data_, std::move(e));
    }

    // The exact image: all order()-many roots attained on units.
    std::vector<RootOfUnity> image() const {
        std::int64_t ord = order();
        std::vector<RootOfUnity> out;
        out.reserve(static_cast<std::size_t>(ord));
        for (std::int64_t j = 0; j < ord; ++j) out.emplace_back(ord, j);
        return out;
    }

    // Canonical label "q:e1,...,ek" (bare "q:" when the group is trivial).
    std::string label() const {
        std::string s = std::to_string(data_->q) + ":";
        for (std::size_t i = 0; i < exps_.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(exps_[i]);
        }
        return s;
    }

    friend bool operator==(const DirichletCharacter& a, const DirichletCharacter& b) {
        return a.data_->q == b.data_->q && a.exps_ == b.exps_;
    }

private:
    std::shared_ptr<const detail::GroupData> data_;
    std::vector<std::int64_t> exps_;

    friend class CharacterGroup;
};

// ---------------------------------------------------------------------------
// CharacterGroup
// ---------------------------------------------------------------------------

class CharacterGroup {
public:
    explicit CharacterGroup(std::int64_t q) : data_(detail::build_group(q)) {}

    std::int64_t modulus() const { return data_->q; }
    std::int64_t size() const { return data_->phi; }
    std::int64_t exponent() const { return data_->exponent; }

    DirichletCharacter principal() const {
        return DirichletCharacter(data_, std::vector<std::int64_t>(data_->factors.size(), 0));
    }

    DirichletCharacter character(std::vector<std::int64_t> exps) const {
        return DirichletCharacter(data_, std::move(exps));
    }

    // All phi(q) characters in lexicographic exponent order (deterministic).
    std::vector<DirichletCharacter> all() const {
        std::vector<DirichletCharacter> out;
        std::vector<std::int64_t> e(data_->factors.size(), 0);
        while (true) {
            out.push_back(DirichletCharacter(data_, e));
            std::size_t i = e.size();
            while (i > 0) {
                --i;
                if (++e[i] < data_->factors[i].order) break;
                e[i] = 0;
                if (i == 0) return out;
            }
            if (e.empty()) return out;
        }
    }

    static DirichletCharacter parse_label(const std::string& label) {
        auto colon = label.find(':');
        if (colon == std::string::npos)
            throw std::domain_error("character label must look like 'q:e1,...,ek', got '" +
                                    label + "'");
        std::int64_t q = 0;
        try {
            q = std::stoll(label.substr(0, colon));
        } catch (const std::exception&) {
            throw std::domain_error("character label has bad modulus: '" + label + "'");
        }
        CharacterGroup group(q);
        std::vector<std::int64_t> exps;
        std::string body = label.substr(colon + 1);
        if (!body.empty()) {
            std::stringstream ss(body);
            std::string tok;
            while (std::getline(ss, tok, ',')) {
                try {
                    exps.push_back(std::stoll(tok));
                } catch (const std::exception&) {
                    throw std::domain_error("character label has bad exponent: '" + label + "'");
                }
            }
        }
        return group.character(std::move(exps));
    }

private:
    std::shared_ptr<const detail::GroupData> data_;
};

inline DirichletCharacter principal(std::int64_t q) { return CharacterGroup(q).principal(); }

// Exact sum over all characters of chi(n) * conj(chi(d)).  Terms are tallied
// by exponent of zeta_L (L = group exponent) and reduced once, so the value
// is exact and the cost is one basis reduction per call.
inline CyclotomicRational orthogonality_sum(const CharacterGroup& group, std::int64_t n,
                                            std::int64_t d) {
    const std::int64_t L = group.exponent();
    std::vector<Rat> counts(static_cast<std::size_t>(L), Rat(0));
    for (const auto& chi : group.all()) {
        auto zn = chi(n);
        if (!zn) return CyclotomicRational();  // n not a unit: every term vanishes
        auto zd = chi(d);
        if (!zd) return CyclotomicRational();
        RootOfUnity z = *zn * zd->conj();
        std::int64_t e = (z.exponent() * (L / z.order())) % L;
        counts[static_cast<std::size_t>(e)] += 1;
    }
    return CyclotomicRational::from_coefficients(L, std::move(counts));
}

// Exact orthogonality-based indicator of n == d (mod q) on units:
// (1/phi(q)) * sum over characters of chi(n) * conj(chi(d)).
inline Rat progression_indicator(std::int64_t d, std::int64_t q, std::int64_t n) {
    if (q < 1) throw std::domain_error("progression_indicator: modulus must be positive");
    if (std::gcd(((d % q) + q) % q, q) != 1)
        throw std::domain_error("progression_indicator: gcd(d, q) must be 1");
    CharacterGroup group(q);
    CyclotomicRational sum = orthogonality_sum(group, n, d);
    if (!sum.is_rational())
        throw std::logic_error("progression_indicator: non-rational character sum");
    return sum.as_rational() / Rat(group.size());
}

} // namespace chars
} // namespace mfsign
