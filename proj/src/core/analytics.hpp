#ifndef SPARROW_CORE_ANALYTICS_HPP
#define SPARROW_CORE_ANALYTICS_HPP

#include <cstdint>

#include "rng.hpp"
#include "scheme.hpp"

namespace sparrow {

enum class Method : std::uint8_t { ClosedForm = 0, Exhaustive = 1, MonteCarlo = 2 };

/// Identity collision probability P_C: the chance that a non-winning
/// contender's decision function evaluates to Proceed on the winner's
/// broadcast (two-UE contention, i.i.d. uniform identities, diagonal
/// included).
struct CollisionStats {
    double p_c = 0.0;
    double log2_p_c = 0.0;
    Method method = Method::ClosedForm;
    std::uint64_t trials = 0; // MonteCarlo only
    double ci_low = 0.0;      // binomial 95% CI, MonteCarlo only
    double ci_high = 0.0;
    bool has_exact = false; // exact rational available below
    unsigned __int128 num = 0;
    unsigned __int128 den = 1;
};

/// SPARROW communication disruption rate P_D: the chance that at least two
/// codebook digests alias to the same broadcast symbol in one attempt.
struct DisruptionStats {
    double p_d = 0.0;
    int l_bits = 0;
    double k = 0.0; // real-valued to support trade-off curve solving
    int m_bits = 0;
    Method method = Method::ClosedForm;
    std::uint64_t trials = 0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    bool saturated = false; // more codewords than distinct cut-sets
};

/// Exact P_C by enumeration of the defining two-UE probability: all
/// identity pairs and, where the scheme randomizes, all masks. Uses the
/// translation invariance of the XOR/erasure schemes (the decision outcome
/// depends only on x1 XOR x2 and the mask) to enumerate (x1 XOR x2, mask)
/// pairs with exact integer counting; a unit test checks this reduction
/// against the unreduced double loop at small widths. Elisha is evaluated
/// as the random-oracle expectation in exact rational arithmetic.
/// Requires n_bits <= 14.
CollisionStats pc_exact(const SchemeConfig& cfg);

/// P_C = C(n,k) / 2^n. Exact integers for n <= 64, log-gamma above.
CollisionStats pc_kerrors(int n, int k);

/// P_C = 2^(k-n).
CollisionStats pc_kerasures(int n, int k);

/// P_C ~= 2^(k-l); ignores digest collisions.
CollisionStats pc_elisha(int l, int k);

/// P_D = 1 - prod_{i=0}^{2^m - 1} (2^l - i 2^k) / (2^l - i), evaluated in
/// log space (log1p accumulation; closed-form power-sum tail for large 2^m).
/// Returns exactly 1 with `saturated` set when any factor is <= 0, i.e.
/// when 2^m codewords cannot occupy distinct cut-sets.
DisruptionStats pd_elisha(int l, int k, int m);

/// Same formula with real-valued k (analytic continuation used to solve
/// the protection/performance trade-off curves).
DisruptionStats pd_elisha_real(int l, double k, int m);

/// Empirical P_D: a random codebook of 2^m distinct identities is pushed
/// through a fresh salt and mask each trial; a trial counts as disrupted
/// when any two erased digests coincide. Salts that produce colliding
/// digests are redrawn, matching the negligible-hash-collision assumption
/// behind the closed form. Requires an Elisha config with l_bits <= 24 and
/// salt_bits >= 1.
DisruptionStats pd_montecarlo(const SchemeConfig& cfg, int m,
                              std::uint64_t trials, Rng& rng);

/// I(X;Y) = -log2(P_C) bits per attempt. p_c must be in (0, 1].
double capacity_from_pc(double p_c);

/// Exact I(X;Y) for Plain/KErrors/KErasures with uniform identities,
/// obtained from the full conditional distribution p(Y|X) with the hint
/// treated as part of Y. Requires n_bits <= 12. Elisha is not supported
/// on this path (its closed form is pc_elisha/capacity_from_pc).
double mutual_information_bruteforce(const SchemeConfig& cfg);

/// Smallest error probability P_e satisfying
///   H_b(P_e) + P_e log2(2^alphabet_log2 - 1) >= h_x_given_y,
/// found by monotone bisection to 1e-9.
double fano_lower_bound(double h_x_given_y, int alphabet_log2);

/// Largest integer k with 2^(k-l) <= pc_target (Eq.-13-style inversion).
int elisha_k_for_pc(int l, double pc_target);

/// Real-valued k with pd_elisha_real(l, k, m) == pd_target, by bisection.
double elisha_k_for_pd(int l, int m, double pd_target);

/// Exact binomial coefficient, n <= 64.
unsigned __int128 binom_exact(int n, int k);

/// log2 C(n,k) via log-gamma, any 0 <= k <= n.
double log2_binom(int n, int k);

/// Cross-multiplied equality of two exact rationals.
bool rationals_equal(const CollisionStats& a, const CollisionStats& b);

/// 95% binomial confidence interval (normal approximation).
void binomial_ci(std::uint64_t successes, std::uint64_t trials, double& lo,
                 double& hi);

} // namespace sparrow

#endif
