#include "adversary.hpp"

#include <algorithm>
#include <cmath>

#include "analytics.hpp"
#include "errors.hpp"

namespace sparrow {

namespace {

bool images_alias(const std::vector<BitString>& images)
{
    if (images.empty())
        return false;
    if (images.front().width() <= 64) {
        std::vector<std::uint64_t> keys(images.size());
        for (std::size_t i = 0; i < images.size(); ++i)
            keys[i] = images[i].low_u64();
        std::sort(keys.begin(), keys.end());
        return std::adjacent_find(keys.begin(), keys.end()) != keys.end();
    }
    std::vector<BitString> sorted = images;
    std::sort(sorted.begin(), sorted.end());
    return std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end();
}

/// Obfuscate `word`, redrawing the salt whenever the book's digests under
/// it collide; keeps Monte Carlo runs on the distinct-digest model that the
/// closed-form P_D assumes. Returns the broadcast and the book images.
std::pair<ObfuscatedBroadcast, BookImages>
obfuscate_with_distinct_digests(const BitString& word, const Codebook& book,
                                const Scheme& scheme, Rng& rng)
{
    for (int attempt = 0; attempt < 10000; ++attempt) {
        ObfuscatedBroadcast y = scheme.obfuscate(word, rng);
        std::vector<BitString> digests;
        digests.reserve(book.size());
        bool collided = false;
        {
            std::vector<BitString> ds;
            ds.reserve(book.size());
            for (const BitString& w : book.words())
                ds.push_back(scheme.digest(w, *y.hint.salt));
            collided = images_alias(ds);
            digests = std::move(ds);
        }
        if (collided)
            continue;
        BookImages imgs;
        imgs.images.reserve(book.size());
        for (const BitString& d : digests)
            imgs.images.push_back(erase_bits(d, *y.hint.mask));
        imgs.aliased = images_alias(imgs.images);
        return {std::move(y), std::move(imgs)};
    }
    raise(ErrorCode::Infeasible,
          "could not draw a collision-free salt for this codebook");
}

} // namespace

DecodeOutcome estimate(const ObfuscatedBroadcast& y, const Codebook& book,
                       const Scheme& scheme)
{
    const SchemeConfig& cfg = scheme.config();
    if (y.tag != cfg.variant)
        raise(ErrorCode::InvalidArgument, "estimate: broadcast tag mismatch");
    if (book.n_bits() != cfg.n_bits)
        raise(ErrorCode::WidthMismatch, "estimate: codebook width mismatch");

    DecodeOutcome out;
    out.candidates_considered = book.size();

    if (book.implicit_full()) {
        if (cfg.variant != Variant::Plain)
            raise(ErrorCode::Unsupported,
                  "implicit full-space book only supports the plain estimator");
        out.kind = DecodeOutcome::Kind::Decoded;
        out.word = y.payload;
        return out;
    }

    if (cfg.variant == Variant::Plain) {
        if (book.contains(y.payload)) {
            out.kind = DecodeOutcome::Kind::Decoded;
            out.word = y.payload;
        }
        return out;
    }

    std::uint64_t consistent = 0;
    std::optional<BitString> last;
    auto consider = [&](const BitString& w, bool match) {
        if (match) {
            ++consistent;
            last = w;
        }
    };
    switch (cfg.variant) {
    case Variant::KErrors:
        for (const BitString& w : book.words())
            consider(w, hamming_distance(y.payload, w) == y.hint.k);
        break;
    case Variant::KErasures:
        for (const BitString& w : book.words())
            consider(w, erase_bits(w, *y.hint.mask) == y.payload);
        break;
    case Variant::Elisha:
        for (const BitString& w : book.words())
            consider(w, erase_bits(scheme.digest(w, *y.hint.salt), *y.hint.mask) ==
                            y.payload);
        break;
    case Variant::Plain:
        break; // handled above
    }
    if (consistent == 1) {
        out.kind = DecodeOutcome::Kind::Decoded;
        out.word = last;
    } else if (consistent > 1) {
        out.kind = DecodeOutcome::Kind::Ambiguous;
    }
    return out;
}

BookImages book_images_elisha(const Codebook& book, const Scheme& scheme,
                              const BitString& salt, const Mask& mask)
{
    if (scheme.config().variant != Variant::Elisha)
        raise(ErrorCode::InvalidArgument, "book_images_elisha needs an elisha scheme");
    BookImages out;
    out.images.reserve(book.size());
    for (const BitString& w : book.words())
        out.images.push_back(erase_bits(scheme.digest(w, salt), mask));
    out.aliased = images_alias(out.images);
    return out;
}

BookImages book_images_kerasures(const Codebook& book, const Mask& mask)
{
    BookImages out;
    out.images.reserve(book.size());
    for (const BitString& w : book.words())
        out.images.push_back(erase_bits(w, mask));
    out.aliased = images_alias(out.images);
    return out;
}

std::optional<BitString> PreimageAttack::decode(const ObfuscatedBroadcast& y) const
{
    auto it = table.find(y.payload.to_string());
    if (it == table.end())
        return std::nullopt;
    return it->second;
}

PreimageAttack preimage_attack(const Codebook& book, const Scheme& scheme)
{
    const SchemeConfig& cfg = scheme.config();
    if (cfg.variant != Variant::Elisha)
        raise(ErrorCode::InvalidArgument, "preimage_attack requires an elisha scheme");
    if (cfg.k != 0)
        raise(ErrorCode::InvalidArgument,
              "preimage_attack requires k == 0: mask randomness defeats a "
              "static table");
    PreimageAttack result;
    if (cfg.salt_bits > 0) {
        result.feasible = false;
        result.cost_log2_per_word = static_cast<double>(cfg.salt_bits);
        return result;
    }
    result.feasible = true;
    const BitString no_salt;
    for (const BitString& w : book.words()) {
        const std::string key = scheme.digest(w, no_salt).to_string();
        auto [it, inserted] = result.table.emplace(key, w);
        if (!inserted)
            ++result.digest_collisions;
    }
    return result;
}

std::vector<ObfuscatedBroadcast> repetition_transmit(const BitString& word,
                                                     int repeats,
                                                     const Scheme& scheme,
                                                     Rng& rng)
{
    if (scheme.config().variant != Variant::KErasures)
        raise(ErrorCode::InvalidArgument, "repetition_transmit requires k-erasures");
    if (repeats < 1)
        raise(ErrorCode::InvalidArgument, "repetition_transmit requires repeats >= 1");
    std::vector<ObfuscatedBroadcast> out;
    out.reserve(static_cast<std::size_t>(repeats));
    for (int i = 0; i < repeats; ++i)
        out.push_back(scheme.obfuscate(word, rng));
    return out;
}

RepetitionRecovery combine_repetitions(std::span<const ObfuscatedBroadcast> reps,
                                       const SchemeConfig& cfg)
{
    if (cfg.variant != Variant::KErasures)
        raise(ErrorCode::InvalidArgument, "combine_repetitions requires k-erasures");
    if (reps.empty())
        raise(ErrorCode::InvalidArgument, "combine_repetitions requires repeats >= 1");
    const int n = cfg.n_bits;
    std::vector<bool> known(static_cast<std::size_t>(n), false);
    BitString word = BitString::zeros(n);
    for (const ObfuscatedBroadcast& y : reps) {
        if (y.tag != Variant::KErasures || !y.hint.mask ||
            y.hint.mask->width() != n)
            raise(ErrorCode::InvalidArgument, "combine_repetitions: bad broadcast");
        int survivor = 0;
        for (int pos = 0; pos < n; ++pos) {
            if (y.hint.mask->bits().bit(pos))
                continue;
            if (!known[static_cast<std::size_t>(pos)]) {
                known[static_cast<std::size_t>(pos)] = true;
                if (y.payload.bit(survivor))
                    word = word.with_bit(pos, true);
            }
            ++survivor;
        }
    }
    RepetitionRecovery rec;
    rec.positions_recovered =
        static_cast<int>(std::count(known.begin(), known.end(), true));
    rec.complete = rec.positions_recovered == n;
    if (rec.complete)
        rec.word = word;
    return rec;
}

double repetition_recovery_exact(int n, int k, int repeats)
{
    if (n < 1 || n > 64 || k < 0 || k > n || repeats < 1)
        raise(ErrorCode::Range, "repetition_recovery_exact: bad parameters");
    // P(no position erased in every repeat), inclusion-exclusion over the
    // set S of always-erased positions:
    //   sum_s (-1)^s C(n,s) [C(n-s, k-s) / C(n,k)]^repeats
    const long double total = static_cast<long double>(binom_exact(n, k));
    long double sum = 0.0L;
    for (int s = 0; s <= k; ++s) {
        const long double within =
            static_cast<long double>(binom_exact(n - s, k - s)) / total;
        long double term = static_cast<long double>(binom_exact(n, s)) *
                           powl(within, static_cast<long double>(repeats));
        sum += (s % 2 == 0) ? term : -term;
    }
    return static_cast<double>(std::clamp(sum, 0.0L, 1.0L));
}

double repetition_recovery_estimate(int n, int k, int repeats)
{
    if (n < 1 || k < 0 || k > n || repeats < 1)
        raise(ErrorCode::Range, "repetition_recovery_estimate: bad parameters");
    const double miss = std::pow(static_cast<double>(k) / n, repeats);
    return std::pow(1.0 - miss, n);
}

DisruptionReport measure_disruption(const Codebook& book, const Scheme& scheme,
                                    std::uint64_t trials, Rng& rng)
{
    if (trials < 1)
        raise(ErrorCode::InvalidArgument, "measure_disruption requires trials >= 1");
    const SchemeConfig& cfg = scheme.config();
    if (book.implicit_full())
        raise(ErrorCode::Unsupported,
              "measure_disruption needs a materialized codebook");

    DisruptionReport rep;
    rep.trials = trials;
    std::uint64_t success = 0, ambiguous = 0, no_match = 0, aliased = 0;

    for (std::uint64_t t = 0; t < trials; ++t) {
        const std::uint64_t idx = rng.below(book.size());
        const BitString word = book.word(idx);

        if (cfg.variant == Variant::Elisha) {
            auto [y, imgs] = obfuscate_with_distinct_digests(word, book, scheme, rng);
            if (imgs.aliased)
                ++aliased;
            std::uint64_t consistent = 0;
            bool own = false;
            for (std::uint64_t i = 0; i < imgs.images.size(); ++i)
                if (imgs.images[i] == y.payload) {
                    ++consistent;
                    if (i == idx)
                        own = true;
                }
            if (consistent == 1 && own)
                ++success;
            else if (consistent > 1)
                ++ambiguous;
            else if (consistent == 0)
                ++no_match;
            continue;
        }

        const ObfuscatedBroadcast y = scheme.obfuscate(word, rng);
        const DecodeOutcome out = estimate(y, book, scheme);
        switch (out.kind) {
        case DecodeOutcome::Kind::Decoded:
            if (*out.word == word)
                ++success;
            break;
        case DecodeOutcome::Kind::Ambiguous:
            ++ambiguous;
            break;
        case DecodeOutcome::Kind::NoMatch:
            ++no_match;
            break;
        }
        switch (cfg.variant) {
        case Variant::KErasures:
            if (book_images_kerasures(book, *y.hint.mask).aliased)
                ++aliased;
            break;
        case Variant::KErrors:
            if (out.kind == DecodeOutcome::Kind::Ambiguous)
                ++aliased;
            break;
        default:
            break;
        }
    }

    const double d = static_cast<double>(trials);
    rep.decode_success_rate = static_cast<double>(success) / d;
    rep.ambiguous_rate = static_cast<double>(ambiguous) / d;
    rep.no_match_rate = static_cast<double>(no_match) / d;
    rep.aliasing_rate = static_cast<double>(aliased) / d;
    return rep;
}

} // namespace sparrow
