#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace mfsign {

// Bad user-supplied configuration (CLI flags, config files, form headers).
// The CLI maps this to exit code 2.
struct config_error : std::runtime_error {
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

// A mathematical consistency check failed at runtime (bound violated,
// eigenvalue relation broken, non-real value where a real one is required).
// The CLI maps this to exit code 3 with a machine-readable record.
struct assertion_failure : std::runtime_error {
    explicit assertion_failure(const std::string& what) : std::runtime_error(what) {}
};

// |A(p)/a(t)| exceeds 2 p^{(2k-1)/2}.
struct rp_violation : assertion_failure {
    std::int64_t p;
    rp_violation(std::int64_t p_, const std::string& what) : assertion_failure(what), p(p_) {}
};

// A value that must be totally real failed the conjugation test.
struct reality_violation : assertion_failure {
    std::int64_t index;
    reality_violation(std::int64_t index_, const std::string& what)
        : assertion_failure(what), index(index_) {}
};

// The sign of a real algebraic value could not be certified even at the
// highest working precision.  Thrown instead of guessing.
struct sign_undecidable : assertion_failure {
    explicit sign_undecidable(const std::string& what) : assertion_failure(what) {}
};

// Requested cache file is absent.  The CLI maps this to exit code 4
// together with the command that would create it.
struct cache_missing : std::runtime_error {
    std::string path;
    explicit cache_missing(const std::string& path_)
        : std::runtime_error("cache file missing: " + path_), path(path_) {}
};

// Cache file exists but is corrupt or inconsistent with the request.
struct cache_mismatch : std::runtime_error {
    explicit cache_mismatch(const std::string& what) : std::runtime_error(what) {}
};

// Structurally or semantically invalid coefficient file.  `kind`
// distinguishes the failure classes so callers and tests can tell a parse
// problem from a violated form invariant.
struct form_error : config_error {
    enum class Kind {
        parse,              // malformed file or value grammar
        level,              // 4 does not divide N
        weight,             // k < 2
        t_not_squarefree,   // designated index t has a square factor
        a_t_zero,           // a(t) vanishes
        character,          // character modulus disagrees with level
        truncation,         // coefficient index outside [1, truncation]
    };
    Kind kind;
    form_error(Kind kind_, const std::string& what) : config_error(what), kind(kind_) {}
};

} // namespace mfsign
