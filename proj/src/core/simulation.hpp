#ifndef SPARROW_CORE_SIMULATION_HPP
#define SPARROW_CORE_SIMULATION_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "adversary.hpp"
#include "analytics.hpp"
#include "codebook.hpp"
#include "scheme.hpp"

namespace sparrow {

/// One RA attempt slot is exchange_ms + backoff_ms of simulated time
/// (defaults: 30 ms exchange, 10 ms back-off).
struct SimConfig {
    SchemeConfig scheme;
    double exchange_ms = 30.0;
    double backoff_ms = 10.0;
    double background_rate = 0.0; // mean contending normal-UE arrivals per slot
    double duration_s = 10.0;
    std::uint64_t seed = 0;

    void validate() const;
    double slot_ms() const { return exchange_ms + backoff_ms; }
};

enum class TrialOutcome : std::uint8_t { Resolved = 0, IdentityCollision = 1 };

/// One contention event: i.i.d. uniform identities, contender 1 is the one
/// whose Msg3 the station received. IdentityCollision when any non-winning
/// contender's decision function says Proceed.
TrialOutcome contention_trial(const Scheme& scheme, int n_contenders, Rng& rng);

/// Two-UE Monte Carlo estimate of P_C with a binomial CI. trials >= 10^4.
CollisionStats estimate_pc_montecarlo(const Scheme& scheme,
                                      std::uint64_t trials, Rng& rng);

/// Metrics of one covert session. goodput_bps counts only chunks that were
/// correctly decoded and correctly attributed by the receiver.
struct TrialReport {
    std::uint64_t attempts = 0;
    std::uint64_t covert_bits_delivered = 0;
    double goodput_bps = 0.0;
    double simulated_seconds = 0.0;
    std::uint64_t chunks_total = 0;
    std::uint64_t chunks_delivered = 0;
    double empirical_p_c = 0.0;
    double p_c_ci_low = 0.0;
    double p_c_ci_high = 0.0;
    std::uint64_t contention_pairs = 0;
    std::uint64_t collision_events = 0;
    double false_accept_rate = 0.0;
    std::uint64_t background_broadcasts = 0;
    std::uint64_t false_accepts = 0;
    double disruption_rate = 0.0;
    std::uint64_t disruption_events = 0;
    std::uint64_t trudy_received_attempts = 0;
    std::uint64_t liveness_violations = 0;
    std::uint64_t seed = 0;

    /// Flat JSON record with stable field order.
    std::string to_json() const;
};

/// Simulate the covert session: per slot the transmitter sends one codeword
/// chunk, Poisson background UEs may contend, the station broadcasts the
/// identity it received, every party applies its decision/estimation
/// function. The transmitter advances to the next chunk when its own
/// decision function says Proceed.
TrialReport run_covert_session(const SimConfig& sim, const Codebook& book,
                               std::uint64_t message_bits, Rng& rng);

/// Convenience overload seeding the stream from sim.seed.
TrialReport run_covert_session(const SimConfig& sim, const Codebook& book,
                               std::uint64_t message_bits);

struct RelayLink {
    int from_cell = 0;
    int to_cell = 0;
    int latency_attempts = 1;
};

struct Topology {
    enum class Mode : std::uint8_t { SingleCell = 0, Parallel = 1, RelayChain = 2 };
    Mode mode = Mode::SingleCell;
    std::vector<SimConfig> cells;
    std::vector<RelayLink> links; // RelayChain only

    void validate() const;

    /// Cell indices in chain order (RelayChain), derived from the links.
    std::vector<int> chain_order() const;
};

struct TopologyReport {
    std::vector<TrialReport> cells;
    double aggregate_goodput_bps = 0.0;   // Parallel: sum of per-cell goodputs
    double end_to_end_goodput_bps = 0.0;  // RelayChain: min over hops
    int end_to_end_latency_attempts = 0;  // RelayChain: sum of hop latencies
    std::string to_json() const;
};

/// Parallel cells split the message and run independently; relay chains
/// carry the full message hop by hop.
TopologyReport run_topology(const Topology& topo, const Codebook& book,
                            std::uint64_t message_bits, Rng& rng);

} // namespace sparrow

#endif
