// End-to-end survey at desk scale: generate the weight-12 coefficient table,
// lift it, invert the lift, and look at the resulting sign function three
// ways -- prime classes, integer classes, and twisted partial sums.
//
// Everything here is deterministic and runs in about a second.

#include "mfsign/mfsign.hpp"

#include <cstdio>
#include <string>

using namespace mfsign;

namespace {

constexpr std::int64_t kX = 20000;

void banner(const char* text) { std::printf("\n== %s ==\n", text); }

std::string bar(double fraction, int width = 40) {
    int fill = static_cast<int>(fraction * width + 0.5);
    std::string out(static_cast<std::size_t>(fill), '#');
    out.resize(static_cast<std::size_t>(width), ' ');
    return out;
}

}  // namespace

int main() {
    std::printf("sign survey at X = %lld\n", static_cast<long long>(kX));

    banner("coefficient table");
    auto series = qseries::delta(kX);
    auto A = shimura::delta_lifted(series);
    std::printf("A(n) for n = 1..8:");
    for (std::int64_t n = 1; n <= 8; ++n)
        std::printf(" %s", qseries::tau(series, n).str().c_str());
    std::printf("\n");

    banner("inverted lift: a(n^2) and its signs");
    auto chi = chars::principal(4);
    auto a = shimura::invert_lift(A, chi, 4, 6, kX);
    auto signs = density::sign_function(a, chi, 4, 1);
    std::printf("n, a(n^2), sign (0 marks the mask at even n):\n");
    for (std::int64_t n = 1; n <= 9; ++n) {
        auto v = a[static_cast<std::size_t>(n)];
        std::printf("  %lld  %-14s %+d\n", static_cast<long long>(n),
                    v.is_zero() ? "0" : v.to_string().c_str(), signs.at(n));
    }
    auto mult = density::multiplicativity_check(signs, 500, kX);
    std::printf("multiplicativity spot check: %lld coprime pairs, %zu violations\n",
                static_cast<long long>(mult.checked), mult.violations.size());

    banner("prime signs by class mod 5");
    auto primes = arith::sieve_primes(kX);
    std::vector<std::pair<std::int64_t, int>> prime_signs;
    for (std::int64_t p : primes.primes) prime_signs.emplace_back(p, signs.at(p));
    std::printf("  d   primes  pos-share\n");
    for (std::int64_t d : {1, 2, 3, 4}) {
        auto rep = satotate::prime_sign_densities(prime_signs, d, 5, kX);
        if (!rep) continue;
        std::printf("  %lld   %6lld  %.4f  |%s|\n", static_cast<long long>(d),
                    static_cast<long long>(rep->class_primes), rep->pos_ratio_class,
                    bar(rep->pos_ratio_class).c_str());
    }

    banner("semicircle histogram of B(p)");
    auto B = shimura::normalized_eigenvalues(A, chars::principal(1), 6, kX);
    auto stats = satotate::restricted_sample(B, satotate::Restriction::everything(), kX);
    std::printf("KS distance to the semicircle CDF: %.4f over %zu primes\n",
                stats->ks_distance, stats->sample.size());
    for (const auto& row : stats->interval_table) {
        std::printf("  [%+.1f, %+.1f)  %5lld  |%s|\n", row.a, row.b,
                    static_cast<long long>(row.count),
                    bar(row.empirical / 0.10, 40).c_str());
    }

    banner("integer signs in classes mod 5");
    std::printf("  d   nonzero  pos-share  zeros\n");
    for (std::int64_t d : {1, 2, 3, 4}) {
        auto rep = density::main_theorem_experiment(signs, 5, d, kX);
        std::printf("  %lld   %7lld  %.4f     %lld\n", static_cast<long long>(d),
                    static_cast<long long>(rep.nonzero), rep.pos_ratio,
                    static_cast<long long>(rep.zero));
    }

    banner("twisted partial sums |sum f(n) eps(n)| / x");
    chars::CharacterGroup group(5);
    std::vector<std::int64_t> checkpoints = {kX / 100, kX / 10, kX};
    std::printf("  character");
    for (auto c : checkpoints) std::printf("  x=%-6lld", static_cast<long long>(c));
    std::printf("\n");
    for (const auto& eps : group.all()) {
        auto rows = density::delange_partial_sums(signs, eps, checkpoints);
        std::printf("  %-9s", eps.label().c_str());
        for (const auto& [x, v] : rows) std::printf("  %.6f", v);
        std::printf("\n");
    }
    std::printf("\nall four sums shrink with x: the signed values cancel along every "
                "twist,\nwhich is the equidistribution on display.\n");
    return 0;
}
