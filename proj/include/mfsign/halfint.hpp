#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "mfsign/arith.hpp"
#include "mfsign/characters.hpp"
#include "mfsign/cyclotomic.hpp"
#include "mfsign/errors.hpp"
#include "mfsign/textio.hpp"

namespace mfsign {
namespace halfint {

using chars::DirichletCharacter;
using cyclo::CyclotomicRational;

// ---------------------------------------------------------------------------
// HalfIntegralForm: weight k + 1/2, level N (4 | N), nebentypus mod N, and an
// exact coefficient table a(n) for 1 <= n <= trunc.  Coefficients are stored
// sparsely; an absent index inside the truncation window reads as 0.
// ---------------------------------------------------------------------------

struct HalfIntegralForm {
    std::int64_t level = 4;
    int k = 2;
    DirichletCharacter nebentypus;  // modulus == level
    std::int64_t t = 1;             // squarefree, a(t) != 0
    std::int64_t trunc = 0;
    std::map<std::int64_t, CyclotomicRational> coeffs;

    const CyclotomicRational& a(std::int64_t n) const {
        static const CyclotomicRational zero;
        if (n < 1 || n > trunc)
            throw std::out_of_range("HalfIntegralForm::a: index " + std::to_string(n) +
                                    " outside [1, " + std::to_string(trunc) + "]");
        auto it = coeffs.find(n);
        return it == coeffs.end() ? zero : it->second;
    }

    const CyclotomicRational& a_t() const { return a(t); }

    void validate() const {
        if (level % 4 != 0)
            throw form_error(form_error::Kind::level,
                             "level " + std::to_string(level) + " is not divisible by 4");
        if (k < 2)
            throw form_error(form_error::Kind::weight,
                             "k = " + std::to_string(k) + " below the supported range (k >= 2)");
        if (nebentypus.modulus() != level)
            throw form_error(form_error::Kind::character,
                             "character modulus " + std::to_string(nebentypus.modulus()) +
                                 " differs from level " + std::to_string(level));
        if (t < 1 || !arith::is_squarefree(t))
            throw form_error(form_error::Kind::t_not_squarefree,
                             "t = " + std::to_string(t) + " is not a squarefree positive integer");
        if (trunc < t)
            throw form_error(form_error::Kind::truncation,
                             "truncation " + std::to_string(trunc) + " does not cover t = " +
                                 std::to_string(t));
        if (a(t).is_zero())
            throw form_error(form_error::Kind::a_t_zero,
                             "a(t) vanishes at t = " + std::to_string(t));
        for (const auto& [n, v] : coeffs) {
            if (n < 1 || n > trunc)
                throw form_error(form_error::Kind::truncation,
                                 "coefficient index " + std::to_string(n) +
                                     " outside [1, " + std::to_string(trunc) + "]");
        }
    }
};

// ---------------------------------------------------------------------------
// form file grammar (line oriented):
//
//   halfint-form 1
//   level <N>
//   k <k>
//   character <q:e1,...,ek>
//   t <t>
//   truncation <T>
//   coeffs
//   <n> <value>          (value: rational "p" | "p/q", or "[m:c0,...,cD-1]")
//   ...
//   end
//
// Zero coefficients may be omitted; the writer prints nonzero entries in
// ascending index order so save -> load -> save is byte-identical.
// ---------------------------------------------------------------------------

inline HalfIntegralForm load_form(std::istream& in, const std::string& origin = "<stream>") {
    auto fail = [&](const std::string& msg) -> std::string { return origin + ": " + msg; };
    std::string line;

    auto next_line = [&](const char* what) {
        if (!std::getline(in, line))
            throw form_error(form_error::Kind::parse, fail(std::string("missing ") + what));
    };
    auto expect_kv = [&](const std::string& key) {
        next_line(key.c_str());
        if (line.rfind(key + " ", 0) != 0)
            throw form_error(form_error::Kind::parse,
                             fail("expected '" + key + " ...', got '" + line + "'"));
        return line.substr(key.size() + 1);
    };
    auto to_int = [&](const std::string& s, const char* what) {
        try {
            std::size_t used = 0;
            std::int64_t v = std::stoll(s, &used);
            if (used != s.size()) throw std::invalid_argument(s);
            return v;
        } catch (const std::exception&) {
            throw form_error(form_error::Kind::parse,
                             fail(std::string("bad integer for ") + what + ": '" + s + "'"));
        }
    };

    next_line("magic line");
    if (line != "halfint-form 1")
        throw form_error(form_error::Kind::parse, fail("bad magic line '" + line + "'"));

    HalfIntegralForm f;
    f.level = to_int(expect_kv("level"), "level");
    f.k = static_cast<int>(to_int(expect_kv("k"), "k"));
    std::string char_label = expect_kv("character");
    try {
        f.nebentypus = chars::CharacterGroup::parse_label(char_label);
    } catch (const std::domain_error& e) {
        throw form_error(form_error::Kind::parse, fail(e.what()));
    }
    f.t = to_int(expect_kv("t"), "t");
    f.trunc = to_int(expect_kv("truncation"), "truncation");

    next_line("coeffs marker");
    if (line != "coeffs")
        throw form_error(form_error::Kind::parse, fail("expected 'coeffs', got '" + line + "'"));
    while (true) {
        next_line("coefficient line or 'end'");
        if (line == "end") break;
        auto space = line.find(' ');
        if (space == std::string::npos)
            throw form_error(form_error::Kind::parse,
                             fail("coefficient line needs 'n value': '" + line + "'"));
        std::int64_t n = to_int(line.substr(0, space), "coefficient index");
        if (n < 1 || n > f.trunc)
            throw form_error(form_error::Kind::truncation,
                             fail("coefficient index " + std::to_string(n) + " outside [1, " +
                                  std::to_string(f.trunc) + "]"));
        if (f.coeffs.count(n))
            throw form_error(form_error::Kind::parse,
                             fail("duplicate coefficient index " + std::to_string(n)));
        try {
            f.coeffs.emplace(n, CyclotomicRational::parse(line.substr(space + 1)));
        } catch (const std::domain_error& e) {
            throw form_error(form_error::Kind::parse, fail(e.what()));
        }
    }
    f.validate();
    return f;
}

inline HalfIntegralForm load_form(const std::filesystem::path& path) {
    std::istringstream in(textio::read_file(path));
    return load_form(in, path.string());
}

inline void save_form(std::ostream& out, const HalfIntegralForm& f) {
    out << "halfint-form 1\n"
        << "level " << f.level << "\n"
        << "k " << f.k << "\n"
        << "character " << f.nebentypus.label() << "\n"
        << "t " << f.t << "\n"
        << "truncation " << f.trunc << "\n"
        << "coeffs\n";
    for (const auto& [n, v] : f.coeffs) {
        if (v.is_zero()) continue;
        out << n << " " << v.to_string() << "\n";
    }
    out << "end\n";
}

inline void save_form(const std::filesystem::path& path, const HalfIntegralForm& f) {
    std::ostringstream out;
    save_form(out, f);
    textio::write_file_atomic(path, out.str());
}

// ---------------------------------------------------------------------------
// Hecke operator coefficient at index n:
//
//   a(p^2 n) + chi(p) * ((-1)^k n | p) * p^{k-1} * a(n)
//            + chi(p)^2 * p^{2k-1} * a(n / p^2)        (0 unless p^2 | n)
//
// This is the single point of external mathematical input in the whole
// library; everything else cross-checks against it.
// ---------------------------------------------------------------------------

inline CyclotomicRational tpsq_coefficient(const HalfIntegralForm& f, std::int64_t p,
                                           std::int64_t n) {
    if (p < 2 || f.level % p == 0)
        throw std::domain_error("tpsq_coefficient: p must be a prime not dividing the level");
    if (n < 1 || p * p * n > f.trunc)
        throw std::out_of_range("tpsq_coefficient: index " + std::to_string(p * p * n) +
                                " outside truncation " + std::to_string(f.trunc));
    CyclotomicRational out = f.a(p * p * n);

    Int sym_arg = (f.k % 2 == 0) ? Int(n) : Int(-n);
    int sym = arith::kronecker(sym_arg, Int(p));
    if (sym != 0) {
        Rat scale = Rat(arith::int_pow(p, f.k - 1)) * sym;
        out = out + f.nebentypus.value(p) * f.a(n) * scale;
    }
    if (n % (p * p) == 0) {
        Rat scale(arith::int_pow(p, 2 * f.k - 1));
        out = out + f.nebentypus.value(p) * f.nebentypus.value(p) * f.a(n / (p * p)) * scale;
    }
    return out;
}

// ---------------------------------------------------------------------------
// eigencheck: recover lambda_p from the first index with a(n) != 0, then
// verify the eigen relation at every such index in range.
// ---------------------------------------------------------------------------

struct EigenResult {
    enum class Status { recovered, violated, inconclusive };
    Status status = Status::inconclusive;
    CyclotomicRational lambda;  // meaningful when status != inconclusive
    std::int64_t witness = 0;   // first violating index when status == violated
};

inline std::map<std::int64_t, EigenResult> eigencheck(const HalfIntegralForm& f,
                                                      const std::vector<std::int64_t>& primes,
                                                      std::int64_t n_max) {
    std::map<std::int64_t, EigenResult> out;
    for (std::int64_t p : primes) {
        EigenResult r;
        bool have_lambda = false;
        for (std::int64_t n = 1; n <= n_max && p * p * n <= f.trunc; ++n) {
            const auto& an = f.a(n);
            if (an.is_zero()) continue;
            CyclotomicRational tp = tpsq_coefficient(f, p, n);
            if (!have_lambda) {
                r.lambda = tp / an;
                r.status = EigenResult::Status::recovered;
                have_lambda = true;
            } else if (tp != r.lambda * an) {
                r.status = EigenResult::Status::violated;
                r.witness = n;
                break;
            }
        }
        out.emplace(p, std::move(r));
    }
    return out;
}

// ---------------------------------------------------------------------------
// reality check: a(t n^2) / chi(n) must be fixed by conjugation for every
// n <= sqrt(trunc / t) with gcd(n, N) = 1.
// ---------------------------------------------------------------------------

struct RealityReport {
    std::int64_t checked = 0;
    std::vector<std::int64_t> violations;
};

inline RealityReport reality_check(const HalfIntegralForm& f) {
    RealityReport rep;
    for (std::int64_t n = 1; f.t * n * n <= f.trunc; ++n) {
        if (std::gcd(n, f.level) != 1) continue;
        auto chi_n = f.nebentypus(n);
        CyclotomicRational v =
            f.a(f.t * n * n) * CyclotomicRational::from_root(chi_n->inverse());
        ++rep.checked;
        if (!v.is_real()) rep.violations.push_back(n);
    }
    return rep;
}

} // namespace halfint
} // namespace mfsign
