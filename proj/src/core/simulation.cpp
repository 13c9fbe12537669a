#include "simulation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "errors.hpp"
#include "json.hpp"

namespace sparrow {

namespace {

using ordered_json = nlohmann::ordered_json;

} // namespace

void SimConfig::validate() const
{
    scheme.validate();
    if (!(exchange_ms > 0.0))
        raise(ErrorCode::Range, "exchange_ms must be positive");
    if (backoff_ms < 0.0)
        raise(ErrorCode::Range, "backoff_ms must be >= 0");
    if (background_rate < 0.0)
        raise(ErrorCode::Range, "background_rate must be >= 0");
    if (!(duration_s > 0.0))
        raise(ErrorCode::Range, "duration_s must be positive");
}

TrialOutcome contention_trial(const Scheme& scheme, int n_contenders, Rng& rng)
{
    if (n_contenders < 2)
        raise(ErrorCode::InvalidArgument, "contention_trial requires >= 2 contenders");
    const int n = scheme.config().n_bits;
    std::vector<BitString> identities;
    identities.reserve(static_cast<std::size_t>(n_contenders));
    for (int i = 0; i < n_contenders; ++i)
        identities.push_back(BitString::random(n, rng));

    const ObfuscatedBroadcast y = scheme.obfuscate(identities[0], rng);
    if (scheme.decide(y, identities[0]) != Decision::Proceed)
        throw std::logic_error("liveness violated: received contender backed off");
    for (int i = 1; i < n_contenders; ++i)
        if (scheme.decide(y, identities[static_cast<std::size_t>(i)]) ==
            Decision::Proceed)
            return TrialOutcome::IdentityCollision;
    return TrialOutcome::Resolved;
}

CollisionStats estimate_pc_montecarlo(const Scheme& scheme,
                                      std::uint64_t trials, Rng& rng)
{
    if (trials < 10000)
        raise(ErrorCode::InvalidArgument,
              "estimate_pc_montecarlo requires trials >= 10^4");
    std::uint64_t collisions = 0;
    for (std::uint64_t t = 0; t < trials; ++t)
        if (contention_trial(scheme, 2, rng) == TrialOutcome::IdentityCollision)
            ++collisions;
    CollisionStats s;
    s.method = Method::MonteCarlo;
    s.trials = trials;
    s.p_c = static_cast<double>(collisions) / static_cast<double>(trials);
    s.log2_p_c = s.p_c > 0.0 ? std::log2(s.p_c)
                             : -std::numeric_limits<double>::infinity();
    binomial_ci(collisions, trials, s.ci_low, s.ci_high);
    return s;
}

std::string TrialReport::to_json() const
{
    ordered_json j;
    j["attempts"] = attempts;
    j["covert_bits_delivered"] = covert_bits_delivered;
    j["goodput_bps"] = goodput_bps;
    j["simulated_seconds"] = simulated_seconds;
    j["chunks_total"] = chunks_total;
    j["chunks_delivered"] = chunks_delivered;
    j["empirical_p_c"] = empirical_p_c;
    j["p_c_ci_low"] = p_c_ci_low;
    j["p_c_ci_high"] = p_c_ci_high;
    j["contention_pairs"] = contention_pairs;
    j["collision_events"] = collision_events;
    j["false_accept_rate"] = false_accept_rate;
    j["background_broadcasts"] = background_broadcasts;
    j["false_accepts"] = false_accepts;
    j["disruption_rate"] = disruption_rate;
    j["disruption_events"] = disruption_events;
    j["trudy_received_attempts"] = trudy_received_attempts;
    j["liveness_violations"] = liveness_violations;
    j["seed"] = seed;
    return j.dump(2);
}

namespace {

/// Receiver-side view of one broadcast: did the estimator attribute it to
/// the covert transmitter, and as which codeword?
struct RickyView {
    bool attributed = false;
    std::optional<BitString> word;
    bool aliased = false; // whole-book symbol aliasing this attempt
};

RickyView ricky_process(const ObfuscatedBroadcast& y, const Codebook& book,
                        const Scheme& scheme)
{
    const SchemeConfig& cfg = scheme.config();
    RickyView view;

    // Tagged books with the plain scheme are filtered by the integrity tag
    // alone: the payload is the codeword, so the checksum distinguishes
    // covert traffic from background identities.
    if (cfg.variant == Variant::Plain &&
        book.structure() == BookStructure::Tagged) {
        if (book.tag_valid(y.payload)) {
            view.attributed = true;
            view.word = y.payload;
        }
        return view;
    }

    if (cfg.variant == Variant::Elisha && !book.implicit_full()) {
        const BookImages imgs =
            book_images_elisha(book, scheme, *y.hint.salt, *y.hint.mask);
        view.aliased = imgs.aliased;
        std::uint64_t consistent = 0;
        std::uint64_t match_idx = 0;
        for (std::uint64_t i = 0; i < imgs.images.size(); ++i)
            if (imgs.images[i] == y.payload) {
                ++consistent;
                match_idx = i;
            }
        if (consistent == 1) {
            view.attributed = true;
            view.word = book.word(match_idx);
        }
        return view;
    }

    if (cfg.variant == Variant::KErasures && !book.implicit_full())
        view.aliased = book_images_kerasures(book, *y.hint.mask).aliased;

    const DecodeOutcome out = estimate(y, book, scheme);
    if (out.kind == DecodeOutcome::Kind::Decoded) {
        view.attributed = true;
        view.word = out.word;
    }
    return view;
}

} // namespace

TrialReport run_covert_session(const SimConfig& sim, const Codebook& book,
                               std::uint64_t message_bits, Rng& rng)
{
    sim.validate();
    const SchemeConfig& cfg = sim.scheme;
    if (book.n_bits() != cfg.n_bits)
        raise(ErrorCode::WidthMismatch, "codebook width does not match scheme");
    const std::uint64_t m_bits = static_cast<std::uint64_t>(book.m_bits());
    if (m_bits == 0)
        raise(ErrorCode::InvalidArgument, "codebook must carry at least 1 bit");
    if (message_bits < m_bits)
        raise(ErrorCode::InvalidArgument,
              "message_bits must be at least the book's bits per codeword");

    const Scheme scheme(cfg, mix64(sim.seed));
    TrialReport rep;
    rep.seed = sim.seed;
    rep.chunks_total = (message_bits + m_bits - 1) / m_bits;

    // The covert message, fixed up front: one codeword per chunk.
    std::vector<BitString> chunks;
    chunks.reserve(rep.chunks_total);
    for (std::uint64_t c = 0; c < rep.chunks_total; ++c)
        chunks.push_back(book.implicit_full()
                             ? BitString::random(cfg.n_bits, rng)
                             : book.word(rng.below(book.size())));

    const std::uint64_t max_slots = static_cast<std::uint64_t>(
        std::floor(sim.duration_s * 1000.0 / sim.slot_ms()));

    std::uint64_t chunk_idx = 0;
    for (std::uint64_t slot = 0; slot < max_slots && chunk_idx < rep.chunks_total;
         ++slot) {
        ++rep.attempts;
        const BitString& trudy_word = chunks[chunk_idx];

        // Contenders this slot: the covert transmitter plus Poisson
        // background UEs with fresh uniform identities.
        const int background = rng.poisson(sim.background_rate);
        std::vector<BitString> others;
        others.reserve(static_cast<std::size_t>(background));
        for (int i = 0; i < background; ++i)
            others.push_back(BitString::random(cfg.n_bits, rng));

        // The station receives exactly one Msg3, chosen uniformly.
        const std::uint64_t recv =
            rng.below(static_cast<std::uint64_t>(1 + background));
        const bool trudy_received = recv == 0;
        const BitString& x =
            trudy_received ? trudy_word : others[static_cast<std::size_t>(recv - 1)];

        const ObfuscatedBroadcast y = scheme.obfuscate(x, rng);

        if (scheme.decide(y, x) != Decision::Proceed)
            ++rep.liveness_violations;

        // Identity collisions among the losing contenders (Eq.-2 events).
        if (!trudy_received) {
            ++rep.contention_pairs;
            if (scheme.decide(y, trudy_word) == Decision::Proceed)
                ++rep.collision_events;
        }
        for (std::uint64_t i = 0; i < others.size(); ++i) {
            if (!trudy_received && i == recv - 1)
                continue;
            ++rep.contention_pairs;
            if (scheme.decide(y, others[static_cast<std::size_t>(i)]) ==
                Decision::Proceed)
                ++rep.collision_events;
        }

        const RickyView view = ricky_process(y, book, scheme);

        if (trudy_received) {
            ++rep.trudy_received_attempts;
            if (view.aliased)
                ++rep.disruption_events;
            if (view.attributed && view.word && *view.word == trudy_word) {
                ++rep.chunks_delivered;
                rep.covert_bits_delivered += m_bits;
            }
        } else {
            ++rep.background_broadcasts;
            if (view.attributed)
                ++rep.false_accepts;
        }

        // The transmitter advances when its own decision function says
        // Proceed (always true when its Msg3 was the one received).
        if (scheme.decide(y, trudy_word) == Decision::Proceed)
            ++chunk_idx;
    }

    const double total_ms = static_cast<double>(rep.attempts) * sim.slot_ms();
    rep.simulated_seconds = total_ms / 1000.0;
    rep.goodput_bps = rep.attempts == 0
                          ? 0.0
                          : static_cast<double>(rep.covert_bits_delivered) *
                                1000.0 / total_ms;
    rep.empirical_p_c =
        rep.contention_pairs == 0
            ? 0.0
            : static_cast<double>(rep.collision_events) /
                  static_cast<double>(rep.contention_pairs);
    binomial_ci(rep.collision_events, rep.contention_pairs, rep.p_c_ci_low,
                rep.p_c_ci_high);
    rep.false_accept_rate =
        rep.background_broadcasts == 0
            ? 0.0
            : static_cast<double>(rep.false_accepts) /
                  static_cast<double>(rep.background_broadcasts);
    rep.disruption_rate =
        rep.trudy_received_attempts == 0
            ? 0.0
            : static_cast<double>(rep.disruption_events) /
                  static_cast<double>(rep.trudy_received_attempts);
    return rep;
}

TrialReport run_covert_session(const SimConfig& sim, const Codebook& book,
                               std::uint64_t message_bits)
{
    Rng rng(sim.seed);
    return run_covert_session(sim, book, message_bits, rng);
}

void Topology::validate() const
{
    if (cells.empty())
        raise(ErrorCode::InvalidArgument, "topology needs at least one cell");
    for (const SimConfig& c : cells)
        c.validate();
    switch (mode) {
    case Mode::SingleCell:
        if (cells.size() != 1)
            raise(ErrorCode::InvalidArgument, "single-cell topology takes one cell");
        break;
    case Mode::Parallel:
        if (!links.empty())
            raise(ErrorCode::InvalidArgument, "parallel cells share no links");
        break;
    case Mode::RelayChain:
        chain_order(); // throws on malformed or cyclic link sets
        break;
    }
}

std::vector<int> Topology::chain_order() const
{
    const int n = static_cast<int>(cells.size());
    if (links.size() + 1 != cells.size())
        raise(ErrorCode::InvalidArgument,
              "relay chain over n cells needs exactly n-1 links");
    std::vector<int> next(static_cast<std::size_t>(n), -1);
    std::vector<int> indegree(static_cast<std::size_t>(n), 0);
    for (const RelayLink& link : links) {
        if (link.from_cell < 0 || link.from_cell >= n || link.to_cell < 0 ||
            link.to_cell >= n)
            raise(ErrorCode::InvalidArgument, "relay link names an unknown cell");
        if (link.latency_attempts < 0)
            raise(ErrorCode::Range, "relay latency must be >= 0 attempts");
        if (next[static_cast<std::size_t>(link.from_cell)] != -1)
            raise(ErrorCode::InvalidArgument, "cell transmits on two relay links");
        next[static_cast<std::size_t>(link.from_cell)] = link.to_cell;
        if (++indegree[static_cast<std::size_t>(link.to_cell)] > 1)
            raise(ErrorCode::InvalidArgument, "cell receives on two relay links");
    }
    int head = -1;
    for (int i = 0; i < n; ++i)
        if (indegree[static_cast<std::size_t>(i)] == 0 &&
            next[static_cast<std::size_t>(i)] != -1) {
            if (head != -1)
                raise(ErrorCode::InvalidArgument, "relay links do not form one chain");
            head = i;
        }
    if (head == -1) {
        if (n == 1 && links.empty())
            return {0};
        raise(ErrorCode::InvalidArgument, "relay links are cyclic");
    }
    std::vector<int> order{head};
    int cur = head;
    while (next[static_cast<std::size_t>(cur)] != -1) {
        cur = next[static_cast<std::size_t>(cur)];
        if (static_cast<int>(order.size()) >= n)
            raise(ErrorCode::InvalidArgument, "relay links are cyclic");
        order.push_back(cur);
    }
    if (static_cast<int>(order.size()) != n)
        raise(ErrorCode::InvalidArgument, "relay links do not reach every cell");
    return order;
}

std::string TopologyReport::to_json() const
{
    ordered_json j;
    j["aggregate_goodput_bps"] = aggregate_goodput_bps;
    j["end_to_end_goodput_bps"] = end_to_end_goodput_bps;
    j["end_to_end_latency_attempts"] = end_to_end_latency_attempts;
    j["cells"] = ordered_json::array();
    for (const TrialReport& r : cells)
        j["cells"].push_back(ordered_json::parse(r.to_json()));
    return j.dump(2);
}

TopologyReport run_topology(const Topology& topo, const Codebook& book,
                            std::uint64_t message_bits, Rng& rng)
{
    topo.validate();
    TopologyReport rep;

    // Each cell gets its own derived seed so the reports echo the stream
    // that actually drove them.
    auto run_cell = [&](const SimConfig& cfg, std::uint64_t stream,
                        std::uint64_t bits) {
        SimConfig cell = cfg;
        cell.seed = rng.fork(stream).seed();
        return run_covert_session(cell, book, bits);
    };

    switch (topo.mode) {
    case Topology::Mode::SingleCell: {
        rep.cells.push_back(run_cell(topo.cells[0], 0, message_bits));
        rep.aggregate_goodput_bps = rep.cells[0].goodput_bps;
        rep.end_to_end_goodput_bps = rep.cells[0].goodput_bps;
        break;
    }
    case Topology::Mode::Parallel: {
        // Each cell carries an equal share of the message.
        const std::uint64_t ncells = topo.cells.size();
        const std::uint64_t base = message_bits / ncells;
        const std::uint64_t extra = message_bits % ncells;
        for (std::uint64_t i = 0; i < ncells; ++i) {
            const std::uint64_t share = base + (i < extra ? 1 : 0);
            rep.cells.push_back(
                run_cell(topo.cells[static_cast<std::size_t>(i)], i, share));
            rep.aggregate_goodput_bps += rep.cells.back().goodput_bps;
        }
        rep.end_to_end_goodput_bps = rep.aggregate_goodput_bps;
        break;
    }
    case Topology::Mode::RelayChain: {
        const std::vector<int> order = topo.chain_order();
        double min_goodput = std::numeric_limits<double>::infinity();
        for (std::size_t hop = 0; hop < order.size(); ++hop) {
            rep.cells.push_back(run_cell(
                topo.cells[static_cast<std::size_t>(order[hop])], hop,
                message_bits));
            min_goodput = std::min(min_goodput, rep.cells.back().goodput_bps);
        }
        rep.end_to_end_goodput_bps = min_goodput;
        rep.aggregate_goodput_bps = min_goodput;
        for (const RelayLink& link : topo.links)
            rep.end_to_end_latency_attempts += link.latency_attempts;
        break;
    }
    }
    return rep;
}

} // namespace sparrow
