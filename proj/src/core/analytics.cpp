#include "analytics.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <vector>

#include "errors.hpp"

namespace sparrow {

namespace {

constexpr double kLn2 = 0.6931471805599453;

long double ln_gamma(long double x)
{
    return lgammal(x);
}

double finish_log2(CollisionStats& s)
{
    if (s.has_exact) {
        s.log2_p_c = static_cast<double>(log2l(static_cast<long double>(s.num)) -
                                         log2l(static_cast<long double>(s.den)));
        s.p_c = static_cast<double>(static_cast<long double>(s.num) /
                                    static_cast<long double>(s.den));
    } else {
        s.p_c = static_cast<double>(exp2l(static_cast<long double>(s.log2_p_c)));
    }
    return s.p_c;
}

/// Enumerate all weight-k masks of the given width as mask values
/// (Gosper's hack); calls fn(Mask) for each.
template <typename Fn>
void for_each_mask(int width, int k, Fn&& fn)
{
    if (k == 0) {
        fn(Mask{BitString::zeros(width)});
        return;
    }
    const std::uint64_t limit = 1ULL << width;
    std::uint64_t v = (1ULL << k) - 1;
    while (v < limit) {
        fn(Mask{BitString::from_value(width, v)});
        const std::uint64_t c = v & (0ULL - v);
        const std::uint64_t r = v + c;
        v = (((r ^ v) >> 2) / c) | r;
    }
}

} // namespace

unsigned __int128 binom_exact(int n, int k)
{
    if (n < 0 || k < 0 || k > n || n > 64)
        raise(ErrorCode::Range, "binom_exact requires 0 <= k <= n <= 64");
    k = std::min(k, n - k);
    unsigned __int128 c = 1;
    for (int i = 1; i <= k; ++i) {
        c *= static_cast<unsigned>(n - k + i);
        c /= static_cast<unsigned>(i);
    }
    return c;
}

double log2_binom(int n, int k)
{
    if (n < 0 || k < 0 || k > n)
        raise(ErrorCode::Range, "log2_binom requires 0 <= k <= n");
    return static_cast<double>(
        (ln_gamma(static_cast<long double>(n) + 1) -
         ln_gamma(static_cast<long double>(k) + 1) -
         ln_gamma(static_cast<long double>(n - k) + 1)) /
        logl(2.0L));
}

bool rationals_equal(const CollisionStats& a, const CollisionStats& b)
{
    if (!a.has_exact || !b.has_exact)
        raise(ErrorCode::InvalidArgument, "rationals_equal needs exact stats");
    return a.num * b.den == b.num * a.den;
}

void binomial_ci(std::uint64_t successes, std::uint64_t trials, double& lo,
                 double& hi)
{
    if (trials == 0) {
        lo = hi = 0.0;
        return;
    }
    const double p = static_cast<double>(successes) / static_cast<double>(trials);
    const double sigma = std::sqrt(std::max(p * (1.0 - p), 0.0) /
                                   static_cast<double>(trials));
    lo = std::max(0.0, p - 1.96 * sigma);
    hi = std::min(1.0, p + 1.96 * sigma);
}

CollisionStats pc_kerrors(int n, int k)
{
    if (n < 1 || n > 256 || k < 0 || k > n)
        raise(ErrorCode::Range, "pc_kerrors requires 0 <= k <= n <= 256");
    CollisionStats s;
    s.method = Method::ClosedForm;
    if (n <= 64) {
        s.has_exact = true;
        s.num = binom_exact(n, k);
        s.den = static_cast<unsigned __int128>(1) << n;
    } else {
        s.log2_p_c = log2_binom(n, k) - n;
    }
    finish_log2(s);
    return s;
}

CollisionStats pc_kerasures(int n, int k)
{
    if (n < 1 || n > 256 || k < 0 || k > n)
        raise(ErrorCode::Range, "pc_kerasures requires 0 <= k <= n <= 256");
    CollisionStats s;
    s.method = Method::ClosedForm;
    if (n - k <= 126) {
        s.has_exact = true;
        s.num = 1;
        s.den = static_cast<unsigned __int128>(1) << (n - k);
    } else {
        s.log2_p_c = static_cast<double>(k - n);
    }
    finish_log2(s);
    return s;
}

CollisionStats pc_elisha(int l, int k)
{
    if (l < 1 || l > 256 || k < 0 || k > l)
        raise(ErrorCode::Range, "pc_elisha requires 0 <= k <= l <= 256");
    CollisionStats s = pc_kerasures(l, k);
    return s;
}

CollisionStats pc_exact(const SchemeConfig& cfg)
{
    cfg.validate();
    const int n = cfg.n_bits;
    if (n > 14)
        raise(ErrorCode::Range, "pc_exact requires n_bits <= 14");

    CollisionStats s;
    s.method = Method::Exhaustive;
    s.has_exact = true;

    const std::uint64_t space = 1ULL << n;
    const Scheme scheme(cfg);

    switch (cfg.variant) {
    case Variant::Plain: {
        // B is deterministic; enumerate the winner's identity fixed at zero
        // (translation invariance) against every contender identity.
        Rng rng(0); // unused by plain obfuscation
        const BitString x1 = BitString::zeros(n);
        const auto y = scheme.obfuscate(x1, rng);
        std::uint64_t count = 0;
        for (std::uint64_t v = 0; v < space; ++v)
            if (scheme.decide(y, BitString::from_value(n, v)) == Decision::Proceed)
                ++count;
        s.num = count;
        s.den = space;
        break;
    }
    case Variant::KErrors:
    case Variant::KErasures: {
        // decide(obfuscate(x1, e), x2) depends only on (x1 ^ x2, e); fix
        // x1 = 0 and enumerate every mask against every difference value.
        const BitString x1 = BitString::zeros(n);
        std::uint64_t count = 0;
        std::uint64_t mask_count = 0;
        for_each_mask(n, cfg.k, [&](const Mask& e) {
            ++mask_count;
            ObfuscatedBroadcast y;
            y.tag = cfg.variant;
            if (cfg.variant == Variant::KErrors) {
                y.payload = x1 ^ e.bits();
                y.hint.k = cfg.k;
            } else {
                y.payload = erase_bits(x1, e);
                y.hint.mask = e;
            }
            for (std::uint64_t v = 0; v < space; ++v)
                if (scheme.decide(y, BitString::from_value(n, v)) ==
                    Decision::Proceed)
                    ++count;
        });
        s.num = count;
        s.den = static_cast<unsigned __int128>(mask_count) * space;
        break;
    }
    case Variant::Elisha: {
        // Random-oracle expectation: the winner always proceeds (weight
        // 2^-n) and every other identity's digest matches the surviving
        // l-k positions with probability 2^(k-l):
        //   P_C = 2^-n + (1 - 2^-n) 2^(k-l)
        //       = (2^(l-k) + 2^n - 1) / 2^(n+l-k).
        const int shift = cfg.n_bits + cfg.l_bits - cfg.k;
        if (shift > 126)
            raise(ErrorCode::Range, "pc_exact(elisha): parameters too wide");
        s.method = Method::ClosedForm;
        s.num = (static_cast<unsigned __int128>(1) << (cfg.l_bits - cfg.k)) +
                (static_cast<unsigned __int128>(1) << n) - 1;
        s.den = static_cast<unsigned __int128>(1) << shift;
        break;
    }
    }
    finish_log2(s);
    return s;
}

namespace {

/// ln prod_{i=0}^{T-1} (1 - i a) - ln prod (1 - i b) with T = 2^m,
/// a = 2^(k-l), b = 2^-l. Returns the log of the no-aliasing probability;
/// -inf means a factor hit zero or below.
long double pd_log_survival(int l, double k, int m, bool& saturated)
{
    const long double a = exp2l(static_cast<long double>(k) - l);
    const long double b = exp2l(static_cast<long double>(-l));
    const long double T = exp2l(static_cast<long double>(m));
    saturated = false;
    if ((T - 1.0L) * a >= 1.0L) {
        saturated = true;
        return -HUGE_VALL;
    }
    constexpr std::uint64_t kDirectLimit = 1ULL << 20;
    if (T <= static_cast<long double>(kDirectLimit)) {
        const std::uint64_t n = static_cast<std::uint64_t>(T);
        long double sum = 0.0L, carry = 0.0L;
        for (std::uint64_t i = 1; i < n; ++i) {
            const long double di = static_cast<long double>(i);
            const long double term = log1pl(-di * a) - log1pl(-di * b);
            const long double y = term - carry;
            const long double t = sum + y;
            carry = (t - sum) - y;
            sum = t;
        }
        return sum;
    }
    // Power-sum expansion of sum_i log1p(-i a): with x = T - 1,
    //   sum = -sum_{p>=1} (a^p - b^p)/p * S_p(x),  S_p(x) = sum_{i=1}^x i^p.
    // Reaching this branch with a finite answer forces (T-1) a << 1, so six
    // terms are far below double rounding.
    const long double x = T - 1.0L;
    long double s[7];
    s[1] = x * (x + 1) / 2;
    s[2] = x * (x + 1) * (2 * x + 1) / 6;
    s[3] = s[1] * s[1];
    s[4] = x * (x + 1) * (2 * x + 1) * (3 * x * x + 3 * x - 1) / 30;
    s[5] = s[3] * (2 * x * x + 2 * x - 1) / 3;
    s[6] = x * (x + 1) * (2 * x + 1) *
           (3 * x * x * x * x + 6 * x * x * x - 3 * x + 1) / 42;
    long double sum = 0.0L;
    long double ap = 1.0L, bp = 1.0L;
    for (int p = 1; p <= 6; ++p) {
        ap *= a;
        bp *= b;
        sum -= (ap - bp) / p * s[p];
    }
    return sum;
}

DisruptionStats pd_closed_form(int l, double k, int m)
{
    if (l < 1 || l > 64)
        raise(ErrorCode::Range, "pd_elisha requires 1 <= l <= 64");
    if (k < 0.0 || k > static_cast<double>(l))
        raise(ErrorCode::Range, "pd_elisha requires 0 <= k <= l");
    if (m < 0 || m > 40)
        raise(ErrorCode::Range, "pd_elisha requires 0 <= m <= 40");

    DisruptionStats s;
    s.l_bits = l;
    s.k = k;
    s.m_bits = m;
    s.method = Method::ClosedForm;
    if (m == 0 || k == 0.0) {
        s.p_d = 0.0;
        return s;
    }
    bool saturated = false;
    const long double log_survival = pd_log_survival(l, k, m, saturated);
    s.saturated = saturated;
    if (saturated) {
        s.p_d = 1.0;
        return s;
    }
    s.p_d = static_cast<double>(-expm1l(log_survival));
    s.p_d = std::clamp(s.p_d, 0.0, 1.0);
    return s;
}

} // namespace

DisruptionStats pd_elisha(int l, int k, int m)
{
    return pd_closed_form(l, static_cast<double>(k), m);
}

DisruptionStats pd_elisha_real(int l, double k, int m)
{
    return pd_closed_form(l, k, m);
}

DisruptionStats pd_montecarlo(const SchemeConfig& cfg, int m,
                              std::uint64_t trials, Rng& rng)
{
    cfg.validate();
    if (cfg.variant != Variant::Elisha)
        raise(ErrorCode::InvalidArgument, "pd_montecarlo requires an elisha scheme");
    if (cfg.l_bits > 24)
        raise(ErrorCode::Range, "pd_montecarlo requires l_bits <= 24");
    if (cfg.salt_bits < 1)
        raise(ErrorCode::InvalidArgument,
              "pd_montecarlo needs salt_bits >= 1 for per-attempt randomness");
    if (trials == 0)
        raise(ErrorCode::InvalidArgument, "pd_montecarlo requires trials >= 1");
    if (m < 0 || m > 20 || m > cfg.n_bits)
        raise(ErrorCode::Range, "pd_montecarlo requires 0 <= m <= min(n_bits, 20)");

    const Scheme scheme(cfg);
    const std::uint64_t book_size = 1ULL << m;

    // Distinct random identities (n <= l <= 24, so values fit in u64).
    std::vector<BitString> words;
    words.reserve(book_size);
    std::vector<bool> seen(1ULL << cfg.n_bits, false);
    while (words.size() < book_size) {
        const std::uint64_t v = rng.below(1ULL << cfg.n_bits);
        if (seen[v])
            continue;
        seen[v] = true;
        words.push_back(BitString::from_value(cfg.n_bits, v));
    }

    std::vector<std::uint64_t> images(book_size);
    std::uint64_t aliased = 0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        // Fresh salt; redraw if it produces a digest collision so the trial
        // matches the distinct-digest model of the closed form.
        std::vector<std::uint64_t> digests(book_size);
        BitString salt;
        for (int attempt = 0;; ++attempt) {
            if (attempt >= 10000)
                raise(ErrorCode::Infeasible,
                      "pd_montecarlo: could not draw collision-free digests");
            salt = BitString::random(cfg.salt_bits, rng);
            for (std::uint64_t i = 0; i < book_size; ++i)
                digests[i] = scheme.digest(words[i], salt).low_u64();
            auto sorted = digests;
            std::sort(sorted.begin(), sorted.end());
            if (std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end())
                break;
        }
        const Mask e = Mask::random_weight(cfg.l_bits, cfg.k, rng);
        for (std::uint64_t i = 0; i < book_size; ++i)
            images[i] =
                erase_bits(BitString::from_value(cfg.l_bits, digests[i]), e)
                    .low_u64();
        std::sort(images.begin(), images.end());
        if (std::adjacent_find(images.begin(), images.end()) != images.end())
            ++aliased;
    }

    DisruptionStats s;
    s.l_bits = cfg.l_bits;
    s.k = cfg.k;
    s.m_bits = m;
    s.method = Method::MonteCarlo;
    s.trials = trials;
    s.p_d = static_cast<double>(aliased) / static_cast<double>(trials);
    binomial_ci(aliased, trials, s.ci_low, s.ci_high);
    return s;
}

double capacity_from_pc(double p_c)
{
    if (!(p_c > 0.0) || p_c > 1.0)
        raise(ErrorCode::Range, "capacity_from_pc requires 0 < p_c <= 1");
    return -std::log2(p_c);
}

double mutual_information_bruteforce(const SchemeConfig& cfg)
{
    cfg.validate();
    if (cfg.variant == Variant::Elisha)
        raise(ErrorCode::Unsupported,
              "mutual_information_bruteforce covers plain/kerrors/kerasures; "
              "use capacity_from_pc(pc_elisha) for elisha");
    const int n = cfg.n_bits;
    if (n > 12)
        raise(ErrorCode::Range, "mutual_information_bruteforce requires n_bits <= 12");

    const std::uint64_t space = 1ULL << n;
    const double px = 1.0 / static_cast<double>(space);

    // Collect the scheme's mask set (one trivial mask for plain).
    std::vector<Mask> masks;
    if (cfg.variant == Variant::Plain)
        masks.emplace_back(BitString::zeros(n));
    else
        for_each_mask(n, cfg.k, [&](const Mask& e) { masks.push_back(e); });
    const double pe = 1.0 / static_cast<double>(masks.size());

    // Y = (payload, hint); keys pack payload value and mask value.
    std::unordered_map<std::uint64_t, double> p_y;
    p_y.reserve(space * 4);
    double h_y_given_x = 0.0;
    std::unordered_map<std::uint64_t, double> cond;
    for (std::uint64_t xv = 0; xv < space; ++xv) {
        const BitString x = BitString::from_value(n, xv);
        cond.clear();
        for (const Mask& e : masks) {
            BitString payload;
            std::uint64_t hint_key = 0;
            switch (cfg.variant) {
            case Variant::Plain:
                payload = x;
                break;
            case Variant::KErrors:
                payload = x ^ e.bits();
                break; // hint is the constant K
            case Variant::KErasures:
                payload = erase_bits(x, e);
                hint_key = e.bits().low_u64() + 1;
                break;
            case Variant::Elisha:
                break; // unreachable
            }
            const std::uint64_t key = (hint_key << 16) | payload.low_u64();
            cond[key] += pe;
        }
        for (const auto& [key, p] : cond) {
            p_y[key] += px * p;
            h_y_given_x -= px * p * std::log2(p);
        }
    }
    double h_y = 0.0;
    for (const auto& [key, p] : p_y)
        h_y -= p * std::log2(p);
    return h_y - h_y_given_x;
}

double fano_lower_bound(double h_x_given_y, int alphabet_log2)
{
    if (alphabet_log2 < 1 || alphabet_log2 > 256)
        raise(ErrorCode::Range, "fano_lower_bound: alphabet_log2 must be in [1, 256]");
    const double a = static_cast<double>(alphabet_log2);
    if (h_x_given_y < 0.0 || h_x_given_y > a)
        raise(ErrorCode::Range,
              "fano_lower_bound: equivocation must be within [0, alphabet_log2]");
    if (h_x_given_y == 0.0)
        return 0.0;

    // log2(2^A - 1) without overflow, and the argmax of the bound.
    const double log2_m1 = a + std::log1p(-std::exp2(-a)) / kLn2;
    const double p_max = 1.0 - std::exp2(-a);
    auto h_b = [](double p) {
        if (p <= 0.0 || p >= 1.0)
            return 0.0;
        return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
    };
    auto f = [&](double p) { return h_b(p) + p * log2_m1; };

    double lo = 0.0, hi = p_max;
    while (hi - lo > 1e-9) {
        const double mid = 0.5 * (lo + hi);
        if (f(mid) >= h_x_given_y)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

int elisha_k_for_pc(int l, double pc_target)
{
    if (l < 1 || l > 256)
        raise(ErrorCode::Range, "elisha_k_for_pc: l must be in [1, 256]");
    if (!(pc_target > 0.0) || pc_target > 1.0)
        raise(ErrorCode::Range, "elisha_k_for_pc: target must be in (0, 1]");
    const double k = std::floor(static_cast<double>(l) + std::log2(pc_target));
    return static_cast<int>(std::clamp(k, 0.0, static_cast<double>(l)));
}

double elisha_k_for_pd(int l, int m, double pd_target)
{
    if (m < 1)
        raise(ErrorCode::Range, "elisha_k_for_pd: m must be >= 1");
    if (!(pd_target > 0.0) || pd_target >= 1.0)
        raise(ErrorCode::Range, "elisha_k_for_pd: target must be in (0, 1)");
    double lo = 0.0, hi = static_cast<double>(l);
    while (hi - lo > 1e-9) {
        const double mid = 0.5 * (lo + hi);
        if (pd_elisha_real(l, mid, m).p_d >= pd_target)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace sparrow
