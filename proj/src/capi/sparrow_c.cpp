// extern-C bindings: opaque handles over the C++ core, exceptions mapped
// to status codes with a thread-local message.

#include "sparrow/sparrow.h"

#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "adversary.hpp"
#include "analytics.hpp"
#include "codebook.hpp"
#include "demos.hpp"
#include "errors.hpp"
#include "scheme.hpp"
#include "simulation.hpp"

using namespace sparrow;

struct sparrow_rng {
    Rng rng;
};
struct sparrow_scheme {
    Scheme scheme;
};
struct sparrow_codebook {
    Codebook book;
};
struct sparrow_broadcast {
    ObfuscatedBroadcast y;
};

namespace {

thread_local std::string g_last_error;

sparrow_status status_from(const Error& e)
{
    g_last_error = e.what();
    switch (e.code()) {
    case ErrorCode::InvalidArgument: return SPARROW_ERR_INVALID;
    case ErrorCode::WidthMismatch: return SPARROW_ERR_WIDTH;
    case ErrorCode::Range: return SPARROW_ERR_RANGE;
    case ErrorCode::Unsatisfiable: return SPARROW_ERR_UNSATISFIABLE;
    case ErrorCode::Infeasible: return SPARROW_ERR_INFEASIBLE;
    case ErrorCode::Unsupported: return SPARROW_ERR_UNSUPPORTED;
    case ErrorCode::Io: return SPARROW_ERR_IO;
    }
    return SPARROW_ERR_INTERNAL;
}

template <typename Fn>
sparrow_status guarded(Fn&& fn)
{
    try {
        fn();
        return SPARROW_OK;
    } catch (const Error& e) {
        return status_from(e);
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return SPARROW_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return SPARROW_ERR_INTERNAL;
    }
}

char* dup_string(const std::string& s)
{
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

SchemeConfig config_from(const sparrow_scheme_params& p)
{
    SchemeConfig cfg;
    cfg.variant = static_cast<Variant>(p.variant);
    cfg.n_bits = p.n_bits;
    cfg.l_bits = p.l_bits;
    cfg.k = p.k;
    cfg.salt_bits = p.salt_bits;
    cfg.backend = static_cast<DigestBackend>(p.backend);
    if (p.variant < 0 || p.variant > 3)
        raise(ErrorCode::InvalidArgument, "unknown scheme variant");
    if (p.backend < 0 || p.backend > 2)
        raise(ErrorCode::InvalidArgument, "unknown digest backend");
    cfg.validate();
    return cfg;
}

SimConfig sim_from(const sparrow_sim_params& p)
{
    SimConfig sim;
    sim.scheme = config_from(p.scheme);
    sim.exchange_ms = p.exchange_ms;
    sim.backoff_ms = p.backoff_ms;
    sim.background_rate = p.background_rate;
    sim.duration_s = p.duration_s;
    sim.seed = p.seed;
    sim.validate();
    return sim;
}

BitString parse_bits(const char* s, const char* what)
{
    if (s == nullptr)
        raise(ErrorCode::InvalidArgument, std::string(what) + " is NULL");
    return BitString::from_string(s);
}

} // namespace

extern "C" {

const char* sparrow_version(void)
{
    return "sparrowlab 1.0.0";
}

const char* sparrow_last_error(void)
{
    return g_last_error.c_str();
}

void sparrow_string_free(char* s)
{
    delete[] s;
}

void sparrow_buffer_free(uint8_t* p)
{
    delete[] p;
}

sparrow_rng* sparrow_rng_create(uint64_t seed)
{
    return new (std::nothrow) sparrow_rng{Rng(seed)};
}

void sparrow_rng_destroy(sparrow_rng* rng)
{
    delete rng;
}

sparrow_status sparrow_scheme_create(const sparrow_scheme_params* params,
                                     sparrow_scheme** out)
{
    return guarded([&] {
        if (params == nullptr || out == nullptr)
            raise(ErrorCode::InvalidArgument, "NULL argument");
        const SchemeConfig cfg = config_from(*params);
        *out = new sparrow_scheme{Scheme(cfg, params->oracle_seed)};
    });
}

void sparrow_scheme_destroy(sparrow_scheme* scheme)
{
    delete scheme;
}

sparrow_status sparrow_obfuscate(sparrow_scheme* scheme,
                                 const char* identity_bits, sparrow_rng* rng,
                                 sparrow_broadcast** out)
{
    return guarded([&] {
        if (scheme == nullptr || rng == nullptr || out == nullptr)
            raise(ErrorCode::InvalidArgument, "NULL argument");
        const BitString x = parse_bits(identity_bits, "identity");
        *out = new sparrow_broadcast{scheme->scheme.obfuscate(x, rng->rng)};
    });
}

void sparrow_broadcast_destroy(sparrow_broadcast* y)
{
    delete y;
}

sparrow_status sparrow_decide(sparrow_scheme* scheme, const sparrow_broadcast* y,
                              const char* identity_bits, int* decision)
{
    return guarded([&] {
        if (scheme == nullptr || y == nullptr || decision == nullptr)
            raise(ErrorCode::InvalidArgument, "NULL argument");
        const BitString x = parse_bits(identity_bits, "identity");
        *decision = scheme->scheme.decide(y->y, x) == Decision::Proceed
                        ? SPARROW_PROCEED
                        : SPARROW_BACKOFF;
    });
}

sparrow_status sparrow_broadcast_payload(const sparrow_broadcast* y,
                                         char** payload_bits)
{
    return guarded([&] {
        if (y == nullptr || payload_bits == nullptr)
            raise(ErrorCode::InvalidArgument, "NULL argument");
        *payload_bits = dup_string(y->y.payload.to_string());
    });
}

sparrow_status sparrow_msg4_encode(const sparrow_scheme* scheme,
                                   const sparrow_broadcast* y, uint8_t** bytes,
                                   size_t* len)
{
    return guarded([&] {
        if (scheme == nullptr || y == nullptr || bytes == nullptr || len == nullptr)
            raise(ErrorCode::InvalidArgument, "NULL argument");
        const auto encoded = encode_msg4(y->y, scheme->scheme.config());
        auto* buf = new uint8_t[encoded.size()];
        std::memcpy(buf, encoded.data(), encoded.size());
        *bytes = buf;
        *len = encoded.size();
    });
}

sparrow_status sparrow_msg4_decode(const sparrow_scheme* scheme,
                                   const uint8_t* bytes, size_t len,
                                   sparrow_broadcast** out)
{
    return guarded([&] {
        if (scheme == nullptr || bytes == nullptr || out == nullptr)
            raise(ErrorCode::InvalidArgument, "NULL argument");
        *out = new sparrow_broadcast{
            decode_msg4({bytes, len}, scheme->scheme.config())};
    });
}

sparrow_status sparrow_codebook_build(int n_bits, int m_bits, int structure,
                                      int param, sparrow_rng* rng,
                                      sparrow_codebook** out)
{
    return guarded([&] {
        if (rng == nullptr || out == nullptr)
            raise(ErrorCode::InvalidArgument, "NULL argument");
        if (structure < 0 || structure > 2)
            raise(ErrorCode::InvalidArgument, "unknown codebook structure");
        *out = new sparrow_codebook{
            Codebook::build(n_bits, m_bits, static_cast<BookStructure>(structure),
                            param, rng->rng)};
    });
}

sparrow_status sparrow_codebook_full(int n_bits, sparrow_codebook** out)
{
    return guarded([&] {
        if (out == nullptr)
            raise(ErrorCode::InvalidArgument, "NULL argument");
        *out = new sparrow_codebook{Codebook::full_space(n_bits)};
    });
}

sparrow_status sparrow_codebook_save(const sparrow_codebook* book,
                                     const char* path)
{
    return guarded([&] {
        if (book == nullptr || path == nullptr)
            raise(ErrorCode::InvalidArgument, "NULL argument");
        book->book.save(path);
    });
}

sparrow_status sparrow_codebook_load(const char* path, sparrow_codebook** out)
{
    return guarded([&] {
        if (path == nullptr || out == nullptr)
            raise(ErrorCode::InvalidArgument, "NULL argument");
        *out = new sparrow_codebook{Codebook::load(path)};
    });
}

uint64_t sparrow_codebook_size(const sparrow_codebook* book)
{
    return book == nullptr ? 0 : book->book.size();
}

sparrow_status sparrow_codebook_word(const sparrow_codebook* book,
                                     uint64_t index, char** word_bits)
{
    return guarded([&] {
        if (book == nullptr || word_bits == nullptr)
            raise(ErrorCode::InvalidArgument, "NULL argument");
        *word_bits = dup_string(book->book.word(index).to_string());
    });
}

void sparrow_codebook_destroy(sparrow_codebook* book)
{
    delete book;
}

sparrow_status sparrow_estimate(sparrow_scheme* scheme, const sparrow_broadcast* y,
                                const sparrow_codebook* book, int* kind,
                                char** word_bits)
{
    return guarded([&] {
        if (scheme == nullptr || y == nullptr || book == nullptr || kind == nullptr)
            raise(ErrorCode::InvalidArgument, "NULL argument");
        const DecodeOutcome out = estimate(y->y, book->book, scheme->scheme);
        *kind = static_cast<int>(out.kind);
        if (word_bits != nullptr)
            *word_bits = out.word ? dup_string(out.word->to_string()) : nullptr;
    });
}

sparrow_status sparrow_pc_kerrors(int n, int k, double* p_c, double* log2_p_c)
{
    return guarded([&] {
        const CollisionStats s = pc_kerrors(n, k);
        if (p_c)
            *p_c = s.p_c;
        if (log2_p_c)
            *log2_p_c = s.log2_p_c;
    });
}

sparrow_status sparrow_pc_kerasures(int n, int k, double* p_c, double* log2_p_c)
{
    return guarded([&] {
        const CollisionStats s = pc_kerasures(n, k);
        if (p_c)
            *p_c = s.p_c;
        if (log2_p_c)
            *log2_p_c = s.log2_p_c;
    });
}

sparrow_status sparrow_pc_elisha(int l, int k, double* p_c, double* log2_p_c)
{
    return guarded([&] {
        const CollisionStats s = pc_elisha(l, k);
        if (p_c)
            *p_c = s.p_c;
        if (log2_p_c)
            *log2_p_c = s.log2_p_c;
    });
}

sparrow_status sparrow_pc_exact(const sparrow_scheme_params* params, double* p_c,
                                double* log2_p_c)
{
    return guarded([&] {
        if (params == nullptr)
            raise(ErrorCode::InvalidArgument, "NULL argument");
        const CollisionStats s = pc_exact(config_from(*params));
        if (p_c)
            *p_c = s.p_c;
        if (log2_p_c)
            *log2_p_c = s.log2_p_c;
    });
}

sparrow_status sparrow_pd_elisha(int l, int k, int m, double* p_d)
{
    return guarded([&] {
        const DisruptionStats s = pd_elisha(l, k, m);
        if (p_d)
            *p_d = s.p_d;
    });
}

sparrow_status sparrow_pd_elisha_real(int l, double k, int m, double* p_d)
{
    return guarded([&] {
        const DisruptionStats s = pd_elisha_real(l, k, m);
        if (p_d)
            *p_d = s.p_d;
    });
}

sparrow_status sparrow_pd_montecarlo(const sparrow_scheme_params* params, int m,
                                     uint64_t trials, uint64_t seed, double* p_d,
                                     double* ci_low, double* ci_high)
{
    return guarded([&] {
        if (params == nullptr)
            raise(ErrorCode::InvalidArgument, "NULL argument");
        Rng rng(seed);
        const DisruptionStats s = pd_montecarlo(config_from(*params), m, trials, rng);
        if (p_d)
            *p_d = s.p_d;
        if (ci_low)
            *ci_low = s.ci_low;
        if (ci_high)
            *ci_high = s.ci_high;
    });
}

sparrow_status sparrow_capacity_from_pc(double p_c, double* bits)
{
    return guarded([&] {
        const double c = capacity_from_pc(p_c);
        if (bits)
            *bits = c;
    });
}

sparrow_status sparrow_mutual_information(const sparrow_scheme_params* params,
                                          double* bits)
{
    return guarded([&] {
        if (params == nullptr)
            raise(ErrorCode::InvalidArgument, "NULL argument");
        const double mi = mutual_information_bruteforce(config_from(*params));
        if (bits)
            *bits = mi;
    });
}

sparrow_status sparrow_fano_lower_bound(double h_x_given_y, int alphabet_log2,
                                        double* p_e)
{
    return guarded([&] {
        const double p = fano_lower_bound(h_x_given_y, alphabet_log2);
        if (p_e)
            *p_e = p;
    });
}

sparrow_status sparrow_elisha_k_for_pc(int l, double pc_target, int* k)
{
    return guarded([&] {
        const int kk = elisha_k_for_pc(l, pc_target);
        if (k)
            *k = kk;
    });
}

sparrow_status sparrow_elisha_k_for_pd(int l, int m, double pd_target, double* k)
{
    return guarded([&] {
        const double kk = elisha_k_for_pd(l, m, pd_target);
        if (k)
            *k = kk;
    });
}

sparrow_status sparrow_estimate_pc_mc(const sparrow_scheme_params* params,
                                      uint64_t trials, uint64_t seed, double* p_c,
                                      double* ci_low, double* ci_high)
{
    return guarded([&] {
        if (params == nullptr)
            raise(ErrorCode::InvalidArgument, "NULL argument");
        const Scheme scheme(config_from(*params), params->oracle_seed);
        Rng rng(seed);
        const CollisionStats s = estimate_pc_montecarlo(scheme, trials, rng);
        if (p_c)
            *p_c = s.p_c;
        if (ci_low)
            *ci_low = s.ci_low;
        if (ci_high)
            *ci_high = s.ci_high;
    });
}

sparrow_status sparrow_run_session(const sparrow_sim_params* sim,
                                   const sparrow_codebook* book,
                                   uint64_t message_bits, char** json_report)
{
    return guarded([&] {
        if (sim == nullptr || book == nullptr || json_report == nullptr)
            raise(ErrorCode::InvalidArgument, "NULL argument");
        const TrialReport rep =
            run_covert_session(sim_from(*sim), book->book, message_bits);
        *json_report = dup_string(rep.to_json());
    });
}

sparrow_status sparrow_run_topology(int mode, const sparrow_sim_params* cells,
                                    int n_cells, const int* hop_latencies,
                                    const sparrow_codebook* book,
                                    uint64_t message_bits, uint64_t seed,
                                    char** json_report)
{
    return guarded([&] {
        if (cells == nullptr || book == nullptr || json_report == nullptr)
            raise(ErrorCode::InvalidArgument, "NULL argument");
        if (mode < 0 || mode > 2)
            raise(ErrorCode::InvalidArgument, "unknown topology mode");
        if (n_cells < 1)
            raise(ErrorCode::InvalidArgument, "topology needs at least one cell");
        Topology topo;
        topo.mode = static_cast<Topology::Mode>(mode);
        for (int i = 0; i < n_cells; ++i)
            topo.cells.push_back(sim_from(cells[i]));
        if (topo.mode == Topology::Mode::RelayChain) {
            for (int i = 0; i + 1 < n_cells; ++i) {
                RelayLink link;
                link.from_cell = i;
                link.to_cell = i + 1;
                link.latency_attempts = hop_latencies ? hop_latencies[i] : 1;
                topo.links.push_back(link);
            }
        }
        Rng rng(seed);
        const TopologyReport rep =
            run_topology(topo, book->book, message_bits, rng);
        *json_report = dup_string(rep.to_json());
    });
}

sparrow_status sparrow_demo_preimage(uint64_t trials, uint64_t seed,
                                     int unsalted_bits, int unsalted_m,
                                     int salted_bits, int salted_k,
                                     int salted_salt_bits, int salted_m,
                                     char** json_report)
{
    return guarded([&] {
        if (json_report == nullptr)
            raise(ErrorCode::InvalidArgument, "NULL argument");
        *json_report = dup_string(
            demo_preimage_report(trials, seed, unsalted_bits, unsalted_m,
                                 salted_bits, salted_k, salted_salt_bits,
                                 salted_m));
    });
}

sparrow_status sparrow_demo_repetition(int n, int k, int repeats, uint64_t trials,
                                       uint64_t seed, char** json_report)
{
    return guarded([&] {
        if (json_report == nullptr)
            raise(ErrorCode::InvalidArgument, "NULL argument");
        *json_report = dup_string(demo_repetition_report(n, k, repeats, trials, seed));
    });
}

sparrow_status sparrow_demo_mindist(int n, int m, int d, int k, uint64_t trials,
                                    uint64_t seed, char** json_report)
{
    return guarded([&] {
        if (json_report == nullptr)
            raise(ErrorCode::InvalidArgument, "NULL argument");
        *json_report = dup_string(demo_mindist_report(n, m, d, k, trials, seed));
    });
}

} // extern "C"
