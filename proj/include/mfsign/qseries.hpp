#pragma once

#include <cstdint>
#include <filesystem>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mfsign/arith.hpp"
#include "mfsign/errors.hpp"
#include "mfsign/textio.hpp"

namespace mfsign {
namespace qseries {

// ---------------------------------------------------------------------------
// QSeries: truncated q-expansion with exact integer coefficients.  The true
// exponent of coefficient index i is i + offset24/24, so eta factors carry
// their fractional prefactor without leaving integer indexing.
// ---------------------------------------------------------------------------

struct QSeries {
    std::int64_t offset24 = 0;  // total power of q^{1/24} in front
    std::int64_t trunc = 0;     // integer indices 0..trunc are meaningful
    std::vector<Int> c;         // size trunc+1

    const Int& coeff(std::int64_t i) const {
        if (i < 0 || i > trunc)
            throw std::out_of_range("QSeries::coeff: index " + std::to_string(i) +
                                    " outside [0, " + std::to_string(trunc) + "]");
        return c[static_cast<std::size_t>(i)];
    }

    bool integral_exponents() const { return offset24 % 24 == 0; }

    // Coefficient of q^n for series with integral exponents.
    const Int& coeff_at_exponent(std::int64_t n) const {
        if (!integral_exponents())
            throw std::domain_error("QSeries::coeff_at_exponent: fractional exponent offset " +
                                    std::to_string(offset24) + "/24");
        return coeff(n - offset24 / 24);
    }

    std::int64_t max_exponent() const { return trunc + offset24 / 24; }

    std::int64_t nonzero_count() const {
        std::int64_t n = 0;
        for (const Int& v : c)
            if (v != 0) ++n;
        return n;
    }
};

inline QSeries one(std::int64_t trunc) {
    if (trunc < 0) throw std::domain_error("qseries::one: negative truncation");
    QSeries s;
    s.trunc = trunc;
    s.c.assign(static_cast<std::size_t>(trunc) + 1, Int(0));
    s.c[0] = 1;
    return s;
}

// ---------------------------------------------------------------------------
// multiplication: always exact and truncation-preserving.  The convolution
// iterates over the sparser operand's nonzero terms so products of the
// pentagonal-number series stay far below the dense O(T^2) cost.
// ---------------------------------------------------------------------------

inline QSeries mul(const QSeries& a, const QSeries& b) {
    if (a.trunc != b.trunc)
        throw std::domain_error("qseries::mul: truncation mismatch (" +
                                std::to_string(a.trunc) + " vs " + std::to_string(b.trunc) + ")");
    const QSeries& sparse = (a.nonzero_count() <= b.nonzero_count()) ? a : b;
    const QSeries& dense = (&sparse == &a) ? b : a;

    QSeries out;
    out.offset24 = a.offset24 + b.offset24;
    out.trunc = a.trunc;
    out.c.assign(static_cast<std::size_t>(out.trunc) + 1, Int(0));

    const std::int64_t T = out.trunc;
    for (std::int64_t i = 0; i <= T; ++i) {
        const Int& s = sparse.c[static_cast<std::size_t>(i)];
        if (s == 0) continue;
        const std::int64_t last = T - i;
        if (s == 1) {
            for (std::int64_t j = 0; j <= last; ++j) {
                const Int& d = dense.c[static_cast<std::size_t>(j)];
                if (d != 0) out.c[static_cast<std::size_t>(i + j)] += d;
            }
        } else if (s == -1) {
            for (std::int64_t j = 0; j <= last; ++j) {
                const Int& d = dense.c[static_cast<std::size_t>(j)];
                if (d != 0) out.c[static_cast<std::size_t>(i + j)] -= d;
            }
        } else {
            for (std::int64_t j = 0; j <= last; ++j) {
                const Int& d = dense.c[static_cast<std::size_t>(j)];
                if (d != 0) out.c[static_cast<std::size_t>(i + j)] += s * d;
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// powering.  For sparse bases (eta and friends) sequential multiplication
// costs at most (r-1) * nnz(base) * T coefficient updates, which beats binary
// powering because squaring densifies immediately.  Dense bases fall back to
// binary powering.
// ---------------------------------------------------------------------------

inline QSeries pow(const QSeries& a, std::int64_t r) {
    if (r < 1) throw std::domain_error("qseries::pow: exponent must be >= 1");
    if (r == 1) return a;

    std::int64_t root = 1;
    while ((root + 1) * (root + 1) <= a.trunc + 1) ++root;
    const std::int64_t sparse_cut = std::max<std::int64_t>(64, 4 * root);

    if (a.nonzero_count() <= sparse_cut) {
        QSeries acc = a;
        for (std::int64_t i = 1; i < r; ++i) acc = mul(acc, a);
        return acc;
    }
    QSeries result = one(a.trunc);
    QSeries base = a;
    std::int64_t e = r;
    while (e > 0) {
        if (e & 1) result = mul(result, base);
        e >>= 1;
        if (e > 0) base = mul(base, base);
    }
    return result;
}

// ---------------------------------------------------------------------------
// constructors: eta, theta, delta
// ---------------------------------------------------------------------------

// eta(m z) up to q^T: offset24 = m, integer part prod_{n>=1} (1 - q^{mn}).
// Nonzero coefficients sit at generalized pentagonal numbers scaled by m,
// with values +-1 (pentagonal number theorem).
inline QSeries dedekind_eta(std::int64_t m, std::int64_t trunc) {
    if (m < 1) throw std::domain_error("dedekind_eta: scale must be >= 1");
    if (trunc < 1) throw std::domain_error("dedekind_eta: truncation must be >= 1");
    QSeries s;
    s.offset24 = m;
    s.trunc = trunc;
    s.c.assign(static_cast<std::size_t>(trunc) + 1, Int(0));
    s.c[0] = 1;
    for (std::int64_t j = 1;; ++j) {
        std::int64_t g1 = j * (3 * j - 1) / 2;  // generalized pentagonal numbers
        std::int64_t g2 = j * (3 * j + 1) / 2;
        int sgn = (j % 2 == 0) ? 1 : -1;
        bool any = false;
        if (m * g1 <= trunc) { s.c[static_cast<std::size_t>(m * g1)] = sgn; any = true; }
        if (m * g2 <= trunc) { s.c[static_cast<std::size_t>(m * g2)] = sgn; any = true; }
        if (!any) break;
    }
    return s;
}

// theta = 1 + 2 sum_{n>=1} q^{n^2}, integral exponents.
inline QSeries theta(std::int64_t trunc) {
    if (trunc < 1) throw std::domain_error("theta: truncation must be >= 1");
    QSeries s;
    s.trunc = trunc;
    s.c.assign(static_cast<std::size_t>(trunc) + 1, Int(0));
    s.c[0] = 1;
    for (std::int64_t n = 1; n * n <= trunc; ++n) s.c[static_cast<std::size_t>(n * n)] = 2;
    return s;
}

// Delta = q * prod (1-q^n)^24; coefficient of q^n is tau(n) for 1 <= n <= T.
// Computed as (eta^3)^8: eta^3 is again sparse (nonzero only at triangular
// numbers, by Jacobi's identity), so every multiplication in the 8th power
// keeps a sparse operand and the total cost stays near nnz * T instead of T^2.
inline QSeries delta(std::int64_t trunc) {
    if (trunc < 1) throw std::domain_error("delta: truncation must be >= 1");
    if (trunc == 1) {
        QSeries s;  // only tau(1) requested
        s.offset24 = 24;
        s.trunc = 0;
        s.c.assign(1, Int(1));
        return s;
    }
    QSeries eta1 = dedekind_eta(1, trunc - 1);
    QSeries eta3 = mul(mul(eta1, eta1), eta1);
    return pow(eta3, 8);
}

inline Int tau(const QSeries& delta_series, std::int64_t n) {
    return delta_series.coeff_at_exponent(n);
}

// ---------------------------------------------------------------------------
// disk cache: versioned text header + one decimal coefficient per line,
// FNV-1a checksum over the coefficient block.
// ---------------------------------------------------------------------------

struct CacheHeader {
    std::string constructor;  // e.g. "delta", "eta"
    std::string params;       // constructor parameters, "-" if none
    std::int64_t offset24 = 0;
    std::int64_t trunc = 0;
    std::string checksum;
};

inline std::string cache_basename(const std::string& constructor, const std::string& params,
                                  std::int64_t trunc) {
    std::string tag = params.empty() || params == "-" ? "" : "_" + params;
    for (auto& ch : tag)
        if (ch == ' ' || ch == '=' || ch == ',') ch = '-';
    return constructor + tag + "_T" + std::to_string(trunc) + ".qcache";
}

inline std::string serialize_cache(const QSeries& s, const std::string& constructor,
                                   const std::string& params) {
    std::string block;
    block.reserve(static_cast<std::size_t>(s.trunc + 1) * 8);
    for (const Int& v : s.c) {
        block += v.str();
        block += '\n';
    }
    std::ostringstream head;
    head << "qseries-cache 1\n"
         << "constructor " << constructor << "\n"
         << "params " << (params.empty() ? "-" : params) << "\n"
         << "offset24 " << s.offset24 << "\n"
         << "truncation " << s.trunc << "\n"
         << "checksum fnv1a64:" << textio::hex64(textio::fnv1a64(block)) << "\n"
         << "coeffs " << (s.trunc + 1) << "\n";
    return head.str() + block + "end\n";
}

inline void save_cache(const std::filesystem::path& path, const QSeries& s,
                       const std::string& constructor, const std::string& params) {
    textio::write_file_atomic(path, serialize_cache(s, constructor, params));
}

inline std::pair<QSeries, CacheHeader> load_cache(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) throw cache_missing(path.string());
    std::istringstream in(textio::read_file(path));
    std::string line;

    auto expect_kv = [&](const std::string& key) {
        if (!std::getline(in, line))
            throw cache_mismatch(path.string() + ": truncated header (missing " + key + ")");
        if (line.rfind(key + " ", 0) != 0)
            throw cache_mismatch(path.string() + ": expected '" + key + "', got '" + line + "'");
        return line.substr(key.size() + 1);
    };

    if (!std::getline(in, line) || line != "qseries-cache 1")
        throw cache_mismatch(path.string() + ": bad magic line");
    CacheHeader h;
    h.constructor = expect_kv("constructor");
    h.params = expect_kv("params");
    try {
        h.offset24 = std::stoll(expect_kv("offset24"));
        h.trunc = std::stoll(expect_kv("truncation"));
    } catch (const cache_mismatch&) {
        throw;
    } catch (const std::exception&) {
        throw cache_mismatch(path.string() + ": non-numeric header field");
    }
    h.checksum = expect_kv("checksum");
    std::int64_t count = 0;
    try {
        count = std::stoll(expect_kv("coeffs"));
    } catch (const cache_mismatch&) {
        throw;
    } catch (const std::exception&) {
        throw cache_mismatch(path.string() + ": bad coefficient count");
    }
    if (count != h.trunc + 1)
        throw cache_mismatch(path.string() + ": count disagrees with truncation");

    QSeries s;
    s.offset24 = h.offset24;
    s.trunc = h.trunc;
    s.c.reserve(static_cast<std::size_t>(count));
    std::string block;
    block.reserve(static_cast<std::size_t>(count) * 8);
    for (std::int64_t i = 0; i < count; ++i) {
        if (!std::getline(in, line))
            throw cache_mismatch(path.string() + ": truncated coefficient block");
        try {
            s.c.emplace_back(line);
        } catch (const std::exception&) {
            throw cache_mismatch(path.string() + ": bad coefficient at index " + std::to_string(i));
        }
        block += line;
        block += '\n';
    }
    if (!std::getline(in, line) || line != "end")
        throw cache_mismatch(path.string() + ": missing end marker");
    std::string want = "fnv1a64:" + textio::hex64(textio::fnv1a64(block));
    if (h.checksum != want)
        throw cache_mismatch(path.string() + ": checksum mismatch (file " + h.checksum +
                             ", computed " + want + ")");
    return {std::move(s), std::move(h)};
}

} // namespace qseries
} // namespace mfsign
