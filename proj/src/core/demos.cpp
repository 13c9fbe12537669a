#include "demos.hpp"

#include "adversary.hpp"
#include "analytics.hpp"
#include "errors.hpp"
#include "json.hpp"

namespace sparrow {

namespace {
using ordered_json = nlohmann::ordered_json;
}

std::string demo_preimage_report(std::uint64_t trials, std::uint64_t seed,
                                 int unsalted_bits, int unsalted_m,
                                 int salted_bits, int salted_k,
                                 int salted_salt_bits, int salted_m)
{
    if (trials < 1)
        raise(ErrorCode::InvalidArgument, "demo needs trials >= 1");
    Rng rng(seed);
    ordered_json j;
    j["mode"] = "preimage";
    j["seed"] = seed;
    j["trials"] = trials;

    {
        const SchemeConfig cfg =
            SchemeConfig::elisha(unsalted_bits, unsalted_bits, 0, 0,
                                 DigestBackend::TruncatedCryptoHash);
        const Scheme scheme(cfg, mix64(seed));
        Rng book_rng = rng.fork(1);
        const Codebook book = Codebook::build(unsalted_bits, unsalted_m,
                                              BookStructure::Random, 0, book_rng);
        const PreimageAttack attack = preimage_attack(book, scheme);
        std::uint64_t success = 0;
        Rng trial_rng = rng.fork(2);
        for (std::uint64_t t = 0; t < trials; ++t) {
            const BitString word = book.word(trial_rng.below(book.size()));
            const ObfuscatedBroadcast y = scheme.obfuscate(word, trial_rng);
            const auto decoded = attack.decode(y);
            if (decoded && *decoded == word)
                ++success;
        }
        ordered_json u;
        u["n_bits"] = unsalted_bits;
        u["l_bits"] = unsalted_bits;
        u["m_bits"] = unsalted_m;
        u["salt_bits"] = 0;
        u["table_entries"] = attack.table.size();
        u["table_digest_collisions"] = attack.digest_collisions;
        u["decode_success_rate"] =
            static_cast<double>(success) / static_cast<double>(trials);
        j["unsalted"] = u;
    }

    {
        const SchemeConfig cfg =
            SchemeConfig::elisha(salted_bits, salted_bits, salted_k,
                                 salted_salt_bits,
                                 DigestBackend::TruncatedCryptoHash);
        const Scheme scheme(cfg, mix64(seed + 1));
        Rng book_rng = rng.fork(3);
        const Codebook book = Codebook::build(salted_bits, salted_m,
                                              BookStructure::Random, 0, book_rng);

        // The table route is rejected outright once salting is on.
        const SchemeConfig table_cfg = SchemeConfig::elisha(
            salted_bits, salted_bits, 0, salted_salt_bits,
            DigestBackend::TruncatedCryptoHash);
        const Scheme table_scheme(table_cfg, mix64(seed + 2));
        const PreimageAttack attack = preimage_attack(book, table_scheme);

        Rng trial_rng = rng.fork(4);
        const DisruptionReport rep =
            measure_disruption(book, scheme, trials, trial_rng);
        const DisruptionStats predicted =
            pd_elisha(salted_bits, salted_k, salted_m);

        ordered_json s;
        s["n_bits"] = salted_bits;
        s["l_bits"] = salted_bits;
        s["k"] = salted_k;
        s["salt_bits"] = salted_salt_bits;
        s["m_bits"] = salted_m;
        s["table_feasible"] = attack.feasible;
        s["table_cost_log2_per_word"] = attack.cost_log2_per_word;
        s["decode_success_rate"] = rep.decode_success_rate;
        s["aliasing_rate"] = rep.aliasing_rate;
        s["predicted_disruption_rate"] = predicted.p_d;
        s["predicted_channel_success"] = 1.0 - predicted.p_d;
        j["salted"] = s;
    }
    return j.dump(2);
}

std::string demo_repetition_report(int n, int k, int repeats,
                                   std::uint64_t trials, std::uint64_t seed)
{
    if (trials < 1)
        raise(ErrorCode::InvalidArgument, "demo needs trials >= 1");
    const SchemeConfig cfg = SchemeConfig::kerasures(n, k);
    const Scheme scheme(cfg);
    Rng rng(seed);
    std::uint64_t recovered = 0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        const BitString word = BitString::random(n, rng);
        const auto reps = repetition_transmit(word, repeats, scheme, rng);
        const RepetitionRecovery rec = combine_repetitions(reps, cfg);
        if (rec.complete && rec.word == word)
            ++recovered;
    }
    ordered_json j;
    j["mode"] = "repetition";
    j["seed"] = seed;
    j["n_bits"] = n;
    j["k"] = k;
    j["repeats"] = repeats;
    j["trials"] = trials;
    j["measured_recovery_rate"] =
        static_cast<double>(recovered) / static_cast<double>(trials);
    j["exact_recovery_probability"] = repetition_recovery_exact(n, k, repeats);
    j["independent_position_estimate"] =
        repetition_recovery_estimate(n, k, repeats);
    return j.dump(2);
}

std::string demo_mindist_report(int n, int m, int d, int k,
                                std::uint64_t trials, std::uint64_t seed)
{
    if (trials < 1)
        raise(ErrorCode::InvalidArgument, "demo needs trials >= 1");
    const SchemeConfig cfg = SchemeConfig::kerrors(n, k);
    const Scheme scheme(cfg);
    Rng rng(seed);
    Rng book_rng = rng.fork(1);
    const Codebook book =
        Codebook::build(n, m, BookStructure::MinDistance, d, book_rng);
    Rng trial_rng = rng.fork(2);
    const DisruptionReport rep = measure_disruption(book, scheme, trials, trial_rng);

    ordered_json j;
    j["mode"] = "mindist";
    j["seed"] = seed;
    j["n_bits"] = n;
    j["m_bits"] = m;
    j["min_distance"] = d;
    j["k"] = k;
    j["trials"] = trials;
    j["decode_success_rate"] = rep.decode_success_rate;
    j["ambiguous_rate"] = rep.ambiguous_rate;
    j["unique_decoding_guaranteed"] = d > 2 * k;
    return j.dump(2);
}

} // namespace sparrow
