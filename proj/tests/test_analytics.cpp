#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "analytics.hpp"
#include "errors.hpp"

using namespace sparrow;

namespace {

/// Independent P_D oracle: plain long-double product of the exact factors
/// (2^l - i 2^k) / (2^l - i), i = 0 .. 2^m - 1.
long double pd_product_oracle(int l, int k, int m)
{
    const long double pow_l = exp2l(static_cast<long double>(l));
    const long double pow_k = exp2l(static_cast<long double>(k));
    const std::uint64_t T = 1ULL << m;
    long double prod = 1.0L;
    for (std::uint64_t i = 0; i < T; ++i) {
        const long double di = static_cast<long double>(i);
        const long double num = pow_l - di * pow_k;
        if (num <= 0.0L)
            return 0.0L;
        prod *= num / (pow_l - di);
    }
    return 1.0L - prod;
}

/// Unreduced P_C oracle over every (x1, x2) identity pair and every mask,
/// driving the real decision function.
double pc_full_enumeration(const SchemeConfig& cfg)
{
    const Scheme scheme(cfg);
    const int n = cfg.n_bits;
    const std::uint64_t space = 1ULL << n;
    std::uint64_t proceeds = 0, cases = 0;
    for (std::uint64_t mv = 0; mv < (1ULL << n); ++mv) {
        if (__builtin_popcountll(mv) != cfg.k)
            continue;
        const Mask e{BitString::from_value(n, mv)};
        for (std::uint64_t x1 = 0; x1 < space; ++x1) {
            ObfuscatedBroadcast y;
            y.tag = cfg.variant;
            if (cfg.variant == Variant::KErrors) {
                y.payload = BitString::from_value(n, x1) ^ e.bits();
                y.hint.k = cfg.k;
            } else {
                y.payload = erase_bits(BitString::from_value(n, x1), e);
                y.hint.mask = e;
            }
            for (std::uint64_t x2 = 0; x2 < space; ++x2) {
                ++cases;
                if (scheme.decide(y, BitString::from_value(n, x2)) ==
                    Decision::Proceed)
                    ++proceeds;
            }
        }
    }
    return static_cast<double>(proceeds) / static_cast<double>(cases);
}

bool log2_consistent(const CollisionStats& s)
{
    if (s.p_c == 0.0)
        return true;
    return std::abs(s.p_c - std::exp2(s.log2_p_c)) <= 1e-12 * s.p_c;
}

} // namespace

TEST_CASE("binomials: exact below the n = 64 seam, log-gamma above")
{
    CHECK(binom_exact(40, 20) == 137846528820ULL);
    CHECK(binom_exact(64, 0) == 1);
    CHECK(binom_exact(64, 1) == 64);
    CHECK_THROWS_AS(binom_exact(65, 2), Error);
    // The two routes agree at the seam...
    const double exact_log2 =
        std::log2(static_cast<double>(binom_exact(64, 32)));
    CHECK(std::abs(log2_binom(64, 32) - exact_log2) < 1e-9);
    // ... and just above it, via Pascal's rule C(65,32) = C(64,31)+C(64,32).
    const long double c65 =
        static_cast<long double>(binom_exact(64, 31)) +
        static_cast<long double>(binom_exact(64, 32));
    CHECK(std::abs(log2_binom(65, 32) -
                   static_cast<double>(log2l(c65))) < 1e-9);
}

TEST_CASE("pc_kerrors closed form")
{
    const CollisionStats k0 = pc_kerrors(40, 0);
    CHECK(k0.p_c == doctest::Approx(std::exp2(-40)).epsilon(1e-12));
    CHECK(k0.num == 1);

    const CollisionStats k20 = pc_kerrors(40, 20);
    CHECK(k20.p_c >= 0.12);
    CHECK(k20.p_c <= 0.13);
    // exact rational: C(40,20) / 2^40
    CHECK(k20.num == 137846528820ULL);
    CHECK(k20.den == (static_cast<unsigned __int128>(1) << 40));
    CHECK(log2_consistent(k20));

    const CollisionStats k40 = pc_kerrors(40, 40);
    CHECK(k40.p_c == doctest::Approx(std::exp2(-40)).epsilon(1e-12));

    // log-gamma regime
    const CollisionStats big = pc_kerrors(128, 64);
    CHECK(big.log2_p_c ==
          doctest::Approx(log2_binom(128, 64) - 128).epsilon(1e-12));
    CHECK(log2_consistent(big));

    CHECK_THROWS_AS(pc_kerrors(8, 9), Error);
    CHECK_THROWS_AS(pc_kerrors(257, 0), Error);
}

TEST_CASE("pc_kerasures and pc_elisha closed forms")
{
    CHECK(pc_kerasures(40, 0).p_c == doctest::Approx(std::exp2(-40)).epsilon(1e-12));
    CHECK(pc_kerasures(40, 40).p_c == 1.0);
    CHECK(pc_kerasures(40, 10).p_c == doctest::Approx(std::exp2(-30)).epsilon(1e-12));
    CHECK(pc_kerasures(40, 10).log2_p_c == -30.0);

    CHECK(pc_elisha(40, 0).log2_p_c == -40.0);
    CHECK(pc_elisha(40, 6).p_c == doctest::Approx(5.8208e-11).epsilon(1e-4));
    CHECK(pc_elisha(40, 6).log2_p_c == -34.0);
    CHECK(pc_elisha(40, 34).p_c == doctest::Approx(0.015625).epsilon(1e-12));
    CHECK(log2_consistent(pc_elisha(256, 0)));
}

TEST_CASE("pc_exact anchor points are exact")
{
    const CollisionStats plain = pc_exact(SchemeConfig::plain(8));
    CHECK(rationals_equal(plain, pc_kerasures(8, 0)));

    const CollisionStats erasures = pc_exact(SchemeConfig::kerasures(8, 3));
    CHECK(rationals_equal(erasures, pc_kerasures(8, 3)));
    CHECK(erasures.p_c == doctest::Approx(std::exp2(-5)).epsilon(1e-12));

    const CollisionStats errors = pc_exact(SchemeConfig::kerrors(8, 2));
    CHECK(rationals_equal(errors, pc_kerrors(8, 2)));
    CHECK(errors.p_c == doctest::Approx(28.0 / 256.0).epsilon(1e-12));

    CHECK_THROWS_AS(pc_exact(SchemeConfig::kerrors(15, 2)), Error);
}

TEST_CASE("pc_exact translation reduction equals the unreduced double loop")
{
    for (int n : {4, 5, 6}) {
        for (int k = 0; k <= n; ++k) {
            for (Variant v : {Variant::KErrors, Variant::KErasures}) {
                const SchemeConfig cfg = v == Variant::KErrors
                                             ? SchemeConfig::kerrors(n, k)
                                             : SchemeConfig::kerasures(n, k);
                const double full = pc_full_enumeration(cfg);
                const CollisionStats reduced = pc_exact(cfg);
                CHECK(reduced.p_c == doctest::Approx(full).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("pc_exact equals the closed forms on a small grid")
{
    for (int n = 1; n <= 10; ++n) {
        for (int k = 0; k <= n; ++k) {
            CHECK(rationals_equal(pc_exact(SchemeConfig::kerrors(n, k)),
                                  pc_kerrors(n, k)));
            CHECK(rationals_equal(pc_exact(SchemeConfig::kerasures(n, k)),
                                  pc_kerasures(n, k)));
        }
    }
}

TEST_CASE("pc_exact for elisha is the random-oracle expectation")
{
    const SchemeConfig cfg =
        SchemeConfig::elisha(8, 12, 3, 16, DigestBackend::RandomOracleStub);
    const CollisionStats s = pc_exact(cfg);
    // 2^-8 + (1 - 2^-8) 2^(3-12)
    const double expected =
        std::exp2(-8) + (1.0 - std::exp2(-8)) * std::exp2(-9);
    CHECK(s.p_c == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("pd_elisha edge cases are exact")
{
    CHECK(pd_elisha(40, 17, 0).p_d == 0.0);
    CHECK(pd_elisha(40, 0, 12).p_d == 0.0);
    CHECK(pd_elisha(40, 40, 1).p_d == 1.0);
    CHECK(pd_elisha(16, 16, 2).p_d == 1.0);
    // 2^m > 2^(l-k): more codewords than cut-sets.
    const DisruptionStats sat = pd_elisha(40, 30, 11);
    CHECK(sat.p_d == 1.0);
    CHECK(sat.saturated);
    // At 2^m == 2^(l-k) every cut-set must be hit exactly once: possible,
    // so not flagged saturated, but vanishingly unlikely.
    const DisruptionStats boundary = pd_elisha(40, 30, 10);
    CHECK(!boundary.saturated);
    CHECK(boundary.p_d > 0.999);
    CHECK_THROWS_AS(pd_elisha(65, 0, 1), Error);
    CHECK_THROWS_AS(pd_elisha(40, 41, 1), Error);
    CHECK_THROWS_AS(pd_elisha(40, 1, 41), Error);
}

TEST_CASE("pd_elisha agrees with the direct product oracle")
{
    // Spans both evaluation branches (direct log1p sum for 2^m <= 2^20,
    // power-sum series above).
    struct Point {
        int l, k, m;
    };
    const Point points[] = {{40, 6, 16}, {40, 12, 8},  {16, 4, 4},
                            {40, 2, 20}, {40, 2, 21},  {40, 1, 22},
                            {24, 2, 10}, {40, 20, 8},  {64, 10, 12},
                            {40, 6, 21}, {40, 18, 16}, {20, 3, 6}};
    for (const Point& p : points) {
        const double oracle = static_cast<double>(pd_product_oracle(p.l, p.k, p.m));
        const DisruptionStats s = pd_elisha(p.l, p.k, p.m);
        CHECK(s.p_d == doctest::Approx(oracle).epsilon(1e-10));
    }
    // The operating point discussed in the text sits near 0.1.
    const double spec_point = pd_elisha(40, 6, 16).p_d;
    CHECK(spec_point >= 0.05);
    CHECK(spec_point <= 0.25);
}

TEST_CASE("pd branch seam: direct sum vs series agree at 2^20/2^21")
{
    for (int k : {1, 2, 3}) {
        const double direct = pd_elisha(40, k, 20).p_d;
        const double oracle20 = static_cast<double>(pd_product_oracle(40, k, 20));
        CHECK(direct == doctest::Approx(oracle20).epsilon(1e-10));
        const double series = pd_elisha(40, k, 21).p_d;
        const double oracle21 = static_cast<double>(pd_product_oracle(40, k, 21));
        CHECK(series == doctest::Approx(oracle21).epsilon(1e-10));
    }
}

TEST_CASE("pd_elisha_real continuously extends the integer formula")
{
    for (int k : {0, 1, 5, 17}) {
        CHECK(pd_elisha_real(40, static_cast<double>(k), 12).p_d ==
              doctest::Approx(pd_elisha(40, k, 12).p_d).epsilon(1e-14));
    }
    CHECK(pd_elisha_real(40, 5.5, 12).p_d > pd_elisha(40, 5, 12).p_d);
    CHECK(pd_elisha_real(40, 5.5, 12).p_d < pd_elisha(40, 6, 12).p_d);
}

TEST_CASE("pd monotonicity in k and m at l = 40")
{
    double prev = -1.0;
    for (int k = 0; k <= 40; ++k) {
        const double pd = pd_elisha(40, k, 16).p_d;
        CHECK(pd >= prev);
        prev = pd;
    }
    prev = -1.0;
    for (int m = 0; m <= 40; ++m) {
        const double pd = pd_elisha(40, 6, m).p_d;
        CHECK(pd >= prev);
        prev = pd;
    }
}

TEST_CASE("pd_montecarlo agrees with the closed form within 3 sigma")
{
    struct Point {
        int l, k, m;
        std::uint64_t trials;
    };
    const Point points[] = {{16, 4, 4, 30000}, {20, 6, 4, 20000}, {12, 2, 3, 30000}};
    std::uint64_t seed = 515;
    for (const Point& p : points) {
        const SchemeConfig cfg = SchemeConfig::elisha(
            p.l, p.l, p.k, 64, DigestBackend::TruncatedCryptoHash);
        Rng rng(seed++);
        const DisruptionStats mc = pd_montecarlo(cfg, p.m, p.trials, rng);
        const double expected = pd_elisha(p.l, p.k, p.m).p_d;
        const double sigma = std::sqrt(expected * (1.0 - expected) /
                                       static_cast<double>(p.trials));
        CHECK(std::abs(mc.p_d - expected) < 3.0 * sigma);
        CHECK(mc.ci_low <= mc.p_d);
        CHECK(mc.ci_high >= mc.p_d);
    }
}

TEST_CASE("pd_montecarlo degenerate cases")
{
    Rng rng(6);
    // k = 0 cannot alias distinct digests.
    const SchemeConfig k0 =
        SchemeConfig::elisha(16, 16, 0, 64, DigestBackend::TruncatedCryptoHash);
    CHECK(pd_montecarlo(k0, 4, 100000, rng).p_d == 0.0);
    // k = l erases everything: any two words alias.
    const SchemeConfig kl =
        SchemeConfig::elisha(16, 16, 16, 64, DigestBackend::TruncatedCryptoHash);
    CHECK(pd_montecarlo(kl, 1, 500, rng).p_d == 1.0);
    // preconditions
    CHECK_THROWS_AS(pd_montecarlo(k0, 4, 0, rng), Error);
    CHECK_THROWS_AS(pd_montecarlo(SchemeConfig::kerrors(16, 4), 4, 10, rng), Error);
    const SchemeConfig too_wide =
        SchemeConfig::elisha(30, 30, 4, 64, DigestBackend::TruncatedCryptoHash);
    CHECK_THROWS_AS(pd_montecarlo(too_wide, 4, 10, rng), Error);
}

TEST_CASE("capacity_from_pc")
{
    CHECK(capacity_from_pc(1.0) == 0.0);
    CHECK(capacity_from_pc(std::exp2(-40)) == doctest::Approx(40.0).epsilon(1e-12));
    CHECK_THROWS_AS(capacity_from_pc(0.0), Error);
    CHECK_THROWS_AS(capacity_from_pc(1.5), Error);
    const double c = capacity_from_pc(pc_kerrors(12, 3).p_c);
    CHECK(c == doctest::Approx(12.0 - log2_binom(12, 3)).epsilon(1e-9));
}

TEST_CASE("mutual information from the full channel matrix")
{
    CHECK(mutual_information_bruteforce(SchemeConfig::plain(8)) ==
          doctest::Approx(8.0).epsilon(1e-9));
    CHECK(mutual_information_bruteforce(SchemeConfig::kerrors(10, 0)) ==
          doctest::Approx(10.0).epsilon(1e-9));
    CHECK(mutual_information_bruteforce(SchemeConfig::kerasures(10, 4)) ==
          doctest::Approx(6.0).epsilon(1e-9));
    CHECK_THROWS_AS(mutual_information_bruteforce(SchemeConfig::kerrors(13, 2)),
                    Error);
    CHECK_THROWS_AS(mutual_information_bruteforce(SchemeConfig::elisha(
                        8, 8, 2, 8, DigestBackend::RandomPermutation)),
                    Error);
}

TEST_CASE("capacity identity: I(X;Y) == -log2(P_C) for both k-schemes")
{
    for (int n : {6, 8}) {
        for (int k = 0; k <= n; ++k) {
            const double mi_err =
                mutual_information_bruteforce(SchemeConfig::kerrors(n, k));
            CHECK(mi_err == doctest::Approx(capacity_from_pc(
                                pc_exact(SchemeConfig::kerrors(n, k)).p_c))
                                .epsilon(1e-9));
            const double mi_era =
                mutual_information_bruteforce(SchemeConfig::kerasures(n, k));
            CHECK(mi_era == doctest::Approx(static_cast<double>(n - k)).epsilon(1e-9));
        }
    }
    // Full brute-force width.
    for (int k : {3, 6}) {
        CHECK(mutual_information_bruteforce(SchemeConfig::kerrors(12, k)) ==
              doctest::Approx(
                  capacity_from_pc(pc_exact(SchemeConfig::kerrors(12, k)).p_c))
                  .epsilon(1e-9));
        CHECK(mutual_information_bruteforce(SchemeConfig::kerasures(12, k)) ==
              doctest::Approx(capacity_from_pc(
                                  pc_exact(SchemeConfig::kerasures(12, k)).p_c))
                  .epsilon(1e-9));
    }
}

TEST_CASE("fano lower bound")
{
    CHECK(fano_lower_bound(0.0, 8) == 0.0);
    CHECK(fano_lower_bound(1.0, 1) == doctest::Approx(0.5).epsilon(1e-6));

    // Full equivocation over an 8-bit alphabet: the bound is met at
    // p = 1 - 1/256; plug the result back in to confirm.
    const double p = fano_lower_bound(8.0, 8);
    CHECK(p == doctest::Approx(1.0 - 1.0 / 256.0).epsilon(1e-6));
    const double log2_m1 = std::log2(255.0);
    const double hb = -p * std::log2(p) - (1 - p) * std::log2(1 - p);
    CHECK(hb + p * log2_m1 == doctest::Approx(8.0).epsilon(1e-6));

    // Monotone in the equivocation.
    double prev = -1.0;
    for (double h = 0.0; h <= 8.0; h += 0.5) {
        const double pe = fano_lower_bound(h, 8);
        CHECK(pe >= prev);
        prev = pe;
    }
    CHECK_THROWS_AS(fano_lower_bound(9.0, 8), Error);
    CHECK_THROWS_AS(fano_lower_bound(-0.1, 8), Error);
}

TEST_CASE("inverting the collision target for k")
{
    CHECK(elisha_k_for_pc(40, 1e-10) == 6);
    CHECK(elisha_k_for_pc(40, std::exp2(-34)) == 6);
    CHECK(elisha_k_for_pc(40, 1.0) == 40);
    CHECK(elisha_k_for_pc(40, std::exp2(-41)) == 0);
    CHECK_THROWS_AS(elisha_k_for_pc(40, 0.0), Error);

    const double k = elisha_k_for_pd(40, 16, 0.1);
    CHECK(pd_elisha_real(40, k, 16).p_d == doctest::Approx(0.1).epsilon(1e-6));
    CHECK_THROWS_AS(elisha_k_for_pd(40, 0, 0.1), Error);
}

TEST_CASE("binomial confidence interval brackets the estimate")
{
    double lo, hi;
    binomial_ci(50, 1000, lo, hi);
    CHECK(lo < 0.05);
    CHECK(hi > 0.05);
    CHECK(lo >= 0.0);
    CHECK(hi <= 1.0);
    binomial_ci(0, 0, lo, hi);
    CHECK(lo == 0.0);
    CHECK(hi == 0.0);
}
