#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "mfsign/qseries.hpp"
#include "mfsign/satotate.hpp"
#include "oracles.hpp"

using namespace mfsign;
using namespace mfsign::satotate;

TEST_CASE("semicircle CDF: pinned values and endpoint behavior") {
    REQUIRE(st_cdf(0.0) == Catch::Approx(0.5).margin(1e-15));
    REQUIRE(st_cdf(1.0) == Catch::Approx(1.0).margin(1e-15));
    REQUIRE(st_cdf(-1.0) == Catch::Approx(0.0).margin(1e-15));
    REQUIRE_THROWS_AS(st_cdf(1.0000001), std::domain_error);
    REQUIRE_THROWS_AS(st_cdf(-1.1), std::domain_error);
    REQUIRE_THROWS_AS(st_cdf(std::nan("")), std::domain_error);

    // nondecreasing on a fine grid
    double prev = 0.0;
    for (int i = 0; i <= 1000; ++i) {
        double x = -1.0 + 2.0 * i / 1000;
        double c = st_cdf(x);
        REQUIRE(c >= prev - 1e-15);
        prev = c;
    }
}

TEST_CASE("semicircle measure: whole mass, halves, additivity") {
    REQUIRE(st_measure(-1, 1) == Catch::Approx(1.0).margin(1e-15));
    REQUIRE(st_measure(0, 1) == Catch::Approx(0.5).margin(1e-15));
    REQUIRE(st_measure(-1, 0) == Catch::Approx(0.5).margin(1e-15));
    REQUIRE_THROWS_AS(st_measure(0.5, 0.4), std::domain_error);
    REQUIRE_THROWS_AS(st_measure(-1.5, 0), std::domain_error);

    std::mt19937_64 gen(7);
    for (int i = 0; i < 200; ++i) {
        double a = 2.0 * rng::rand53(gen) - 1.0;
        double b = 2.0 * rng::rand53(gen) - 1.0;
        double c = 2.0 * rng::rand53(gen) - 1.0;
        double v[3] = {a, b, c};
        std::sort(v, v + 3);
        REQUIRE(st_measure(v[0], v[2]) ==
                Catch::Approx(st_measure(v[0], v[1]) + st_measure(v[1], v[2])).margin(1e-12));
        REQUIRE(st_measure(v[0], v[1]) >= 0.0);
    }
}

TEST_CASE("semicircle measure matches adaptive quadrature") {
    // the acceptance gate runs 100 intervals at 1e-10; pin it here too
    std::mt19937_64 gen(20260819);
    for (int i = 0; i < 100; ++i) {
        double a = 2.0 * rng::rand53(gen) - 1.0;
        double b = 2.0 * rng::rand53(gen) - 1.0;
        if (a > b) std::swap(a, b);
        double exact = st_measure(a, b);
        double quad = oracles::st_measure_quadrature(a, b);
        REQUIRE(std::abs(exact - quad) < 1e-10);
    }
    REQUIRE(std::abs(st_measure(-0.5, 0.5) - oracles::st_measure_quadrature(-0.5, 0.5)) <
            1e-10);
}

TEST_CASE("KS statistic: frozen cases and invariances") {
    REQUIRE(ks_statistic({0.0}, [](double x) { return st_cdf(x); }) ==
            Catch::Approx(0.5).margin(1e-12));

    // quantile construction: x_i = F^{-1}((i - 1/2) / n) gives D = 1/(2n)
    const int n = 500;
    std::vector<double> quantiles;
    for (int i = 1; i <= n; ++i) {
        double target = (i - 0.5) / n;
        double lo = -1, hi = 1;
        for (int it = 0; it < 80; ++it) {
            double mid = (lo + hi) / 2;
            (st_cdf(mid) < target ? lo : hi) = mid;
        }
        quantiles.push_back((lo + hi) / 2);
    }
    double d = ks_statistic(quantiles, [](double x) { return st_cdf(x); });
    REQUIRE(d <= 1.0 / (2 * n) + 1e-9);

    // duplication invariance
    std::vector<double> doubled;
    for (double x : quantiles) {
        doubled.push_back(x);
        doubled.push_back(x);
    }
    std::sort(doubled.begin(), doubled.end());
    REQUIRE(ks_statistic(doubled, [](double x) { return st_cdf(x); }) ==
            Catch::Approx(d).margin(1e-12));

    REQUIRE_THROWS_AS(ks_statistic({}, [](double x) { return st_cdf(x); }),
                      std::domain_error);

    // uniform sample against the uniform CDF on [0,1]: tiny distance
    std::mt19937_64 gen(3);
    std::vector<double> u;
    for (int i = 0; i < 20000; ++i) u.push_back(rng::rand53(gen));
    std::sort(u.begin(), u.end());
    REQUIRE(ks_statistic(u, [](double x) { return x; }) < 0.015);
}

TEST_CASE("st_sample: determinism, range, symmetry, distribution") {
    auto s1 = st_sample(11, 100000);
    auto s2 = st_sample(11, 100000);
    REQUIRE(s1 == s2);
    auto s3 = st_sample(12, 1000);
    REQUIRE(s1[0] != s3[0]);
    REQUIRE_THROWS_AS(st_sample(1, 0), std::domain_error);

    double mean = 0;
    for (double x : s1) {
        REQUIRE(x >= -1.0);
        REQUIRE(x <= 1.0);
        mean += x;
    }
    mean /= static_cast<double>(s1.size());
    REQUIRE(std::abs(mean) < 0.01);

    std::sort(s1.begin(), s1.end());
    REQUIRE(ks_statistic(s1, [](double x) { return st_cdf(x); }) <= 0.01);
}

TEST_CASE("restriction predicates and labels") {
    auto all = Restriction::everything();
    REQUIRE(all.admits(2));
    REQUIRE(all.expected_share() == 1.0);
    REQUIRE(all.label() == "all");

    auto prog = Restriction::progression(3, 4);
    REQUIRE(prog.admits(3));
    REQUIRE(prog.admits(7));
    REQUIRE_FALSE(prog.admits(5));
    REQUIRE(prog.expected_share() == 0.5);
    REQUIRE(prog.label() == "3 mod 4");
    REQUIRE_THROWS_AS(Restriction::progression(2, 4), std::domain_error);

    // degenerate progression (1 mod 1) admits everything
    auto one = Restriction::progression(1, 1);
    for (std::int64_t p : {2, 3, 5, 97}) REQUIRE(one.admits(p));

    chars::CharacterGroup g5(5);
    chars::DirichletCharacter eps;
    for (const auto& c : g5.all())
        if (c.order() == 4) eps = c;
    auto byval = Restriction::character_value(eps, *eps(2));
    REQUIRE(byval.admits(2));
    REQUIRE(byval.admits(7));  // 7 = 2 mod 5
    REQUIRE_FALSE(byval.admits(3));
    REQUIRE_FALSE(byval.admits(5));  // eps undefined at 5
    REQUIRE(byval.expected_share() == 0.25);
    REQUIRE_THROWS_AS(Restriction::character_value(eps, cyclo::RootOfUnity(3, 1)),
                      std::domain_error);
}

namespace {
// synthetic eigenvalue table: primes up to x with i.i.d. semicircle values
shimura::NormalizedEigenvalues synthetic_table(std::uint64_t seed, std::int64_t x) {
    shimura::NormalizedEigenvalues B;
    B.x_max = x;
    B.char_modulus = 1;
    std::mt19937_64 gen(seed);
    auto sieve = arith::sieve_primes(x);
    for (std::int64_t p : sieve.primes) B.table.emplace_back(p, rng::semicircle(gen));
    return B;
}
} // namespace

TEST_CASE("restricted_sample: unrestricted synthetic table is equidistributed") {
    auto B = synthetic_table(5, 200000);  // 17984 primes
    auto s = restricted_sample(B, Restriction::everything(), 200000);
    REQUIRE(s.has_value());
    REQUIRE(s->sample.size() == B.table.size());
    REQUIRE(std::is_sorted(s->sample.begin(), s->sample.end()));
    REQUIRE(s->ks_distance <= 0.03);  // Monte Carlo scale ~ 1/sqrt(18000)

    // interval table: 20 bins, shares near predictions, counts consistent
    REQUIRE(s->interval_table.size() == interval_bins);
    double total_emp = 0, total_pred = 0;
    for (const auto& row : s->interval_table) {
        total_emp += row.empirical;
        total_pred += row.predicted;
        REQUIRE(std::abs(row.empirical - row.predicted) < 0.02);
    }
    REQUIRE(total_pred == Catch::Approx(1.0).margin(1e-12));
    REQUIRE(total_emp >= 1.0 - 1e-12);  // closed intervals can double-count edges
    REQUIRE(s->chi_square < 60.0);      // 19 dof; far out in the tail would be a bug
}

TEST_CASE("restricted_sample: progression split of a synthetic table") {
    // split primes into classes mod 5; each class should still look semicircular
    auto B = synthetic_table(6, 100000);
    std::int64_t covered = 0;
    for (std::int64_t d : {1, 2, 3, 4}) {
        auto s = restricted_sample(B, Restriction::progression(d, 5), 100000);
        REQUIRE(s.has_value());
        covered += static_cast<std::int64_t>(s->sample.size());
        REQUIRE(s->ks_distance <= 0.05);
        // class share of [0, 1] near 1/2 (the Chebotarev prediction shape)
        double share = static_cast<double>(s->count_in(0.0, 1.0)) /
                       static_cast<double>(s->sample.size());
        REQUIRE(share > 0.45);
        REQUIRE(share < 0.55);
    }
    REQUIRE(covered == static_cast<std::int64_t>(B.table.size()) - 1);  // p = 5 in no class

    // degenerate progression matches the unrestricted run exactly
    auto whole = restricted_sample(B, Restriction::everything(), 100000);
    auto degen = restricted_sample(B, Restriction::progression(1, 1), 100000);
    REQUIRE(degen->sample == whole->sample);
    REQUIRE(degen->ks_distance == whole->ks_distance);
}

TEST_CASE("restricted_sample: empty and truncated cases") {
    auto B = synthetic_table(7, 50);
    REQUIRE_FALSE(restricted_sample(B, Restriction::progression(24, 49), 50).has_value());
    REQUIRE_THROWS_AS(restricted_sample(B, Restriction::everything(), 51),
                      std::out_of_range);
    // x_max below the table's reach just truncates
    auto s = restricted_sample(B, Restriction::everything(), 10);
    REQUIRE(s->sample.size() == 4);  // 2, 3, 5, 7
}

TEST_CASE("restricted_sample: character-value classes of a synthetic table") {
    auto B = synthetic_table(8, 100000);
    chars::CharacterGroup g5(5);
    chars::DirichletCharacter eps;
    for (const auto& c : g5.all())
        if (c.order() == 4) eps = c;
    std::int64_t covered = 0;
    for (const auto& xi : eps.image()) {
        auto s = restricted_sample(B, Restriction::character_value(eps, xi), 100000);
        REQUIRE(s.has_value());
        covered += static_cast<std::int64_t>(s->sample.size());
        REQUIRE(s->ks_distance <= 0.05);
    }
    REQUIRE(covered == static_cast<std::int64_t>(B.table.size()) - 1);
}

TEST_CASE("prime sign densities: counting and ratio bookkeeping") {
    // all-positive table: ratios (1, 0, 0)
    std::vector<std::pair<std::int64_t, int>> signs;
    auto sieve = arith::sieve_primes(1000);
    for (std::int64_t p : sieve.primes) signs.emplace_back(p, 1);
    auto rep = prime_sign_densities(signs, 1, 4, 1000);
    REQUIRE(rep.has_value());
    REQUIRE(rep->pos_ratio_class == 1.0);
    REQUIRE(rep->neg_ratio_class == 0.0);
    REQUIRE(rep->zero_ratio_class == 0.0);
    REQUIRE(rep->positive == rep->class_primes);
    REQUIRE(rep->total_primes == static_cast<std::int64_t>(sieve.primes.size()));

    // hand-checkable small case: primes <= 20 congruent 1 mod 4: {5, 13, 17}
    std::vector<std::pair<std::int64_t, int>> small = {
        {2, 1}, {3, 1}, {5, 1}, {7, -1}, {11, 0}, {13, -1}, {17, 1}, {19, 1}};
    auto r = prime_sign_densities(small, 1, 4, 20);
    REQUIRE(r->class_primes == 3);
    REQUIRE(r->positive == 2);   // 5, 17
    REQUIRE(r->negative == 1);   // 13
    REQUIRE(r->zero == 0);
    REQUIRE(r->pos_ratio_class == Catch::Approx(2.0 / 3));
    REQUIRE(r->pos_ratio_all == Catch::Approx(2.0 / 8));

    // x cutoff honored; empty class signalled
    auto cut = prime_sign_densities(small, 1, 4, 12);
    REQUIRE(cut->class_primes == 1);
    REQUIRE_FALSE(prime_sign_densities(small, 21, 1000, 20).has_value());
    REQUIRE_THROWS_AS(prime_sign_densities(small, 2, 4, 20), std::domain_error);
}

TEST_CASE("error fit: planted power law is recovered") {
    std::vector<std::pair<double, double>> pts;
    for (int j = 0; j <= 10; ++j) {
        double x = 1000.0 * std::pow(2.0, j);
        pts.emplace_back(x, 2.0 * std::pow(x, -0.5));
    }
    auto fit = error_term_fit(pts);
    REQUIRE(std::abs(fit.alpha - 0.5) < 1e-9);
    REQUIRE(std::abs(fit.C - 2.0) < 1e-9);
    REQUIRE(fit.residual < 1e-12);
    REQUIRE(fit.checkpoints.size() == 11);

    // alternating sign of E must not matter: |E| is fitted
    auto flipped = pts;
    for (std::size_t i = 0; i < flipped.size(); i += 2) flipped[i].second *= -1.0;
    auto fit2 = error_term_fit(flipped);
    REQUIRE(std::abs(fit2.alpha - 0.5) < 1e-9);
    REQUIRE(std::abs(fit2.C - 2.0) < 1e-9);
}

TEST_CASE("error fit: multiplicative noise shifts alpha only slightly") {
    std::mt19937_64 gen(99);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<std::pair<double, double>> pts;
        for (int j = 0; j <= 12; ++j) {
            double x = 1000.0 * std::pow(2.0, j);
            double noise = 1.0 + 0.01 * (2.0 * rng::rand53(gen) - 1.0);
            pts.emplace_back(x, 2.0 * std::pow(x, -0.5) * noise);
        }
        auto fit = error_term_fit(pts);
        REQUIRE(std::abs(fit.alpha - 0.5) < 0.05);
    }
}

TEST_CASE("error fit: degenerate inputs") {
    // constant E: alpha ~ 0, C ~ the constant
    std::vector<std::pair<double, double>> flat = {
        {10, 0.25}, {100, 0.25}, {1000, 0.25}, {10000, 0.25}};
    auto fit = error_term_fit(flat);
    REQUIRE(std::abs(fit.alpha) < 1e-12);
    REQUIRE(fit.C == Catch::Approx(0.25).margin(1e-12));

    // zero-E and duplicate-x points are discarded; too few points throw
    std::vector<std::pair<double, double>> sparse = {
        {10, 0.0}, {100, 0.1}, {100, 0.2}, {1000, 0.05}};
    REQUIRE_THROWS_AS(error_term_fit(sparse), std::domain_error);
    sparse.emplace_back(10000, 0.02);
    REQUIRE_NOTHROW(error_term_fit(sparse));
}

TEST_CASE("synthetic class split: interval shares track the measure") {
    // split an st_sample stream into phi(q) classes round-robin; each class's
    // interval shares must match mu([a,b]) within 5/sqrt(class size)
    const int classes = 4;
    auto draws = st_sample(31337, 40000);
    std::vector<std::vector<double>> split(classes);
    for (std::size_t i = 0; i < draws.size(); ++i)
        split[i % classes].push_back(draws[i]);
    for (auto& cls : split) {
        std::sort(cls.begin(), cls.end());
        double slack = 5.0 / std::sqrt(static_cast<double>(cls.size()));
        for (int i = 0; i < interval_bins; ++i) {
            double a = -1.0 + 2.0 * i / interval_bins;
            double b = a + 2.0 / interval_bins;
            auto lo = std::lower_bound(cls.begin(), cls.end(), a);
            auto hi = std::upper_bound(cls.begin(), cls.end(), b);
            double share = static_cast<double>(hi - lo) / static_cast<double>(cls.size());
            REQUIRE(std::abs(share - st_measure(a, b)) <= slack);
        }
    }
}

TEST_CASE("tau eigenvalues: desk-scale Sato-Tate behavior") {
    // modest truncation keeps this test quick; the acceptance gate runs 1e5
    auto A = shimura::delta_lifted(qseries::delta(20000));
    auto B = shimura::normalized_eigenvalues(A, chars::principal(1), 6, 20000);
    auto s = restricted_sample(B, Restriction::everything(), 20000);
    REQUIRE(s.has_value());
    REQUIRE(s->sample.size() == 2262);  // pi(20000)
    REQUIRE(s->ks_distance <= 0.05);

    auto odd = restricted_sample(B, Restriction::progression(3, 4), 20000);
    REQUIRE(odd->ks_distance <= 0.06);
    double share = static_cast<double>(odd->count_in(0.0, 1.0)) /
                   static_cast<double>(odd->sample.size());
    REQUIRE(share > 0.4);
    REQUIRE(share < 0.6);
}
