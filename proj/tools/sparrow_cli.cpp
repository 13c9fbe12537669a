// sparrowlab command-line front end. Reproduces the protection/performance
// figures as CSV, runs covert-session simulations and adversary strategy
// demos from flags or a key=value config file, and writes self-describing
// reports. Talks to the library exclusively through the C API.
//
// Exit codes: 0 success, 2 configuration error, 3 infeasible run.

#include "sparrow/sparrow.h"

#include "CLI11.hpp"
#include "json.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr double kLog10Of2 = 0.30102999566398119521;

struct CliError {
    int exit_code;
    std::string message;
};

[[noreturn]] void fail(int code, const std::string& message)
{
    throw CliError{code, message};
}

int exit_code_for(sparrow_status st)
{
    switch (st) {
    case SPARROW_OK: return 0;
    case SPARROW_ERR_UNSATISFIABLE:
    case SPARROW_ERR_INFEASIBLE: return 3;
    case SPARROW_ERR_INTERNAL: return 1;
    default: return 2;
    }
}

void check(sparrow_status st)
{
    if (st != SPARROW_OK)
        fail(exit_code_for(st), sparrow_last_error());
}

std::string take_string(char* owned)
{
    std::string s = owned ? owned : "";
    sparrow_string_free(owned);
    return s;
}

/// Plain-text config file: one key=value per line, '#' starts a comment.
/// Flags always override file values; keys no subcommand consumed are a
/// configuration error.
class ConfigFile {
public:
    void load(const std::string& path)
    {
        std::ifstream in(path);
        if (!in)
            fail(2, "cannot open config file: " + path);
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos)
                line = line.substr(0, hash);
            const auto first = line.find_first_not_of(" \t\r");
            if (first == std::string::npos)
                continue;
            const auto last = line.find_last_not_of(" \t\r");
            line = line.substr(first, last - first + 1);
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                fail(2, "config line " + std::to_string(lineno) +
                            " is not key=value: " + line);
            const std::string key = line.substr(0, eq);
            const std::string value = line.substr(eq + 1);
            if (!values_.emplace(key, value).second)
                fail(2, "duplicate config key: " + key);
        }
    }

    bool has(const std::string& key)
    {
        const auto it = values_.find(key);
        if (it == values_.end())
            return false;
        used_.insert(key);
        return true;
    }

    const std::string& get(const std::string& key)
    {
        used_.insert(key);
        return values_.at(key);
    }

    void reject_unknown_keys() const
    {
        std::vector<std::string> unknown;
        for (const auto& [key, value] : values_)
            if (!used_.contains(key))
                unknown.push_back(key);
        if (!unknown.empty()) {
            std::string msg = "unknown config key(s):";
            for (const auto& k : unknown)
                msg += " " + k;
            fail(2, msg);
        }
    }

private:
    std::map<std::string, std::string> values_;
    std::set<std::string> used_;
};

template <typename T>
T parse_number(const std::string& value, const std::string& key)
{
    std::istringstream in(value);
    T out{};
    in >> out;
    if (in.fail() || !in.eof())
        fail(2, "config value for '" + key + "' is not a number: " + value);
    return out;
}

/// Applies config-file fallbacks to CLI11 options the user did not pass.
struct Resolver {
    CLI::App* cmd;
    ConfigFile* cfg;

    template <typename T>
    void number(const std::string& flag, const std::string& key, T& var)
    {
        const bool in_file = cfg->has(key); // marks the key as recognized
        const CLI::Option* opt = cmd->get_option("--" + flag);
        if (opt->count() == 0 && in_file)
            var = parse_number<T>(cfg->get(key), key);
    }

    void text(const std::string& flag, const std::string& key, std::string& var)
    {
        const bool in_file = cfg->has(key);
        const CLI::Option* opt = cmd->get_option("--" + flag);
        if (opt->count() == 0 && in_file)
            var = cfg->get(key);
    }
};

void write_atomic(const std::string& path, const std::string& content)
{
    if (path == "-") {
        std::fputs(content.c_str(), stdout);
        return;
    }
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            fail(2, "cannot open output path: " + path);
        out << content;
        if (!out.good())
            fail(2, "failed writing output: " + path);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec)
        fail(2, "cannot move output into place: " + ec.message());
}

std::string format_double(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string csv_preamble(const std::string& command_line, uint64_t seed)
{
    std::ostringstream out;
    out << "# " << sparrow_version() << " | command: " << command_line
        << " | seed: " << seed << "\n";
    return out.str();
}

int variant_from_name(const std::string& name)
{
    if (name == "plain")
        return SPARROW_SCHEME_PLAIN;
    if (name == "kerrors")
        return SPARROW_SCHEME_KERRORS;
    if (name == "kerasures")
        return SPARROW_SCHEME_KERASURES;
    if (name == "elisha")
        return SPARROW_SCHEME_ELISHA;
    fail(2, "unknown scheme: " + name +
                " (expected plain|kerrors|kerasures|elisha)");
}

int backend_from_name(const std::string& name)
{
    if (name == "crypto")
        return SPARROW_DIGEST_CRYPTO_HASH;
    if (name == "perm")
        return SPARROW_DIGEST_PERMUTATION;
    if (name == "oracle")
        return SPARROW_DIGEST_ORACLE;
    fail(2, "unknown digest backend: " + name + " (expected crypto|perm|oracle)");
}

int structure_from_name(const std::string& name)
{
    if (name == "random")
        return SPARROW_BOOK_RANDOM;
    if (name == "mindist")
        return SPARROW_BOOK_MINDIST;
    if (name == "tagged")
        return SPARROW_BOOK_TAGGED;
    fail(2, "unknown codebook structure: " + name +
                " (expected random|mindist|tagged|full)");
}

struct RngHandle {
    sparrow_rng* rng;
    explicit RngHandle(uint64_t seed) : rng(sparrow_rng_create(seed)) {}
    ~RngHandle() { sparrow_rng_destroy(rng); }
};

struct BookHandle {
    sparrow_codebook* book = nullptr;
    ~BookHandle() { sparrow_codebook_destroy(book); }
};

// ---------------------------------------------------------------------------
// figure
// ---------------------------------------------------------------------------

std::string figure_pc_ker()
{
    std::ostringstream out;
    out << "k,pc_kerrors,log10_pc_kerrors,pc_kerasures,log10_pc_kerasures\n";
    for (int k = 0; k <= 40; ++k) {
        double pce, l2e, pcd, l2d;
        check(sparrow_pc_kerrors(40, k, &pce, &l2e));
        check(sparrow_pc_kerasures(40, k, &pcd, &l2d));
        out << k << ',' << format_double(pce) << ','
            << format_double(l2e * kLog10Of2) << ',' << format_double(pcd)
            << ',' << format_double(l2d * kLog10Of2) << "\n";
    }
    return out.str();
}

const int kFigureMSet[] = {4, 8, 16, 24, 32};

std::string figure_m_pb()
{
    std::ostringstream out;
    out << "k";
    for (int m : kFigureMSet)
        out << ",pd_m" << m;
    out << "\n";
    for (int k = 0; k <= 40; ++k) {
        out << k;
        for (int m : kFigureMSet) {
            double pd;
            check(sparrow_pd_elisha(40, k, m, &pd));
            out << ',' << format_double(pd);
        }
        out << "\n";
    }
    return out.str();
}

std::string figure_pc_pb()
{
    std::ostringstream out;
    out << "k,p_c,log10_p_c";
    for (int m : kFigureMSet)
        out << ",pd_m" << m;
    out << "\n";
    for (int k = 0; k <= 40; ++k) {
        double pc, l2;
        check(sparrow_pc_elisha(40, k, &pc, &l2));
        out << k << ',' << format_double(pc) << ',' << format_double(l2 * kLog10Of2);
        for (int m : kFigureMSet) {
            double pd;
            check(sparrow_pd_elisha(40, k, m, &pd));
            out << ',' << format_double(pd);
        }
        out << "\n";
    }
    return out.str();
}

std::string figure_m_pc()
{
    const double targets[] = {0.01, 0.1, 0.5};
    const char* labels[] = {"pd001", "pd010", "pd050"};
    std::ostringstream out;
    out << "m";
    for (const char* label : labels)
        out << ",pc_" << label << ",log10_pc_" << label;
    out << ",pc_reduced_n,log10_pc_reduced_n\n";
    for (int m = 1; m <= 40; ++m) {
        out << m;
        for (double target : targets) {
            double k;
            check(sparrow_elisha_k_for_pd(40, m, target, &k));
            const double log2_pc = k - 40.0;
            out << ',' << format_double(std::exp2(log2_pc)) << ','
                << format_double(log2_pc * kLog10Of2);
        }
        // Baseline that just shrinks the identity field to m bits.
        const double log2_base = -static_cast<double>(m);
        out << ',' << format_double(std::exp2(log2_base)) << ','
            << format_double(log2_base * kLog10Of2) << "\n";
    }
    return out.str();
}

int cmd_figure(CLI::App* cmd, const std::string& command_line)
{
    const std::string name = cmd->get_option("--name")->as<std::string>();
    const std::string out_path = cmd->get_option("--out")->as<std::string>();
    const uint64_t seed = cmd->get_option("--seed")->as<uint64_t>();

    std::string body;
    if (name == "pc-ker")
        body = figure_pc_ker();
    else if (name == "m-pb")
        body = figure_m_pb();
    else if (name == "pc-pb")
        body = figure_pc_pb();
    else if (name == "m-pc")
        body = figure_m_pc();
    else
        fail(2, "unknown figure name: " + name +
                    " (expected pc-ker|m-pb|pc-pb|m-pc)");

    write_atomic(out_path, csv_preamble(command_line, seed) + body);
    return 0;
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

struct SimulateOptions {
    std::string scheme = "plain";
    int n = 40;
    int l = 0;
    int k = 0;
    int salt = 0;
    std::string backend = "crypto";
    uint64_t oracle_seed = 0;
    double exchange_ms = 30.0;
    double backoff_ms = 10.0;
    double background_rate = 0.0;
    double duration_s = 10.0;
    std::string book = "full";
    int m = 0;
    int book_param = 0;
    uint64_t message_bits = 0;
    std::string topology = "single";
    int cells = 1;
    int hop_latency = 1;
    uint64_t seed = 0;
    std::string out = "-";
    std::string config_path;
};

sparrow_scheme_params scheme_params_from(const SimulateOptions& o)
{
    sparrow_scheme_params p{};
    p.variant = variant_from_name(o.scheme);
    p.n_bits = o.n;
    p.l_bits = o.l == 0 && p.variant == SPARROW_SCHEME_ELISHA ? o.n : o.l;
    p.k = o.k;
    p.salt_bits = o.salt;
    p.backend = backend_from_name(o.backend);
    p.oracle_seed = o.oracle_seed;
    return p;
}

void build_book(const SimulateOptions& o, const sparrow_scheme_params& scheme,
                BookHandle& book)
{
    if (o.book == "full") {
        check(sparrow_codebook_full(scheme.n_bits, &book.book));
        return;
    }
    const int structure = structure_from_name(o.book);
    if (o.m <= 0)
        fail(2, "materialized codebooks need --m (bits per codeword) >= 1");
    RngHandle rng(o.seed);
    check(sparrow_codebook_build(scheme.n_bits, o.m, structure, o.book_param,
                                 rng.rng, &book.book));
}

ordered_json simulate_config_json(const SimulateOptions& o)
{
    ordered_json j;
    j["scheme"] = o.scheme;
    j["n"] = o.n;
    j["l"] = o.l;
    j["k"] = o.k;
    j["salt"] = o.salt;
    j["backend"] = o.backend;
    j["oracle_seed"] = o.oracle_seed;
    j["exchange_ms"] = o.exchange_ms;
    j["backoff_ms"] = o.backoff_ms;
    j["background_rate"] = o.background_rate;
    j["duration_s"] = o.duration_s;
    j["book"] = o.book;
    j["m"] = o.m;
    j["book_param"] = o.book_param;
    j["message_bits"] = o.message_bits;
    j["topology"] = o.topology;
    j["cells"] = o.cells;
    j["hop_latency"] = o.hop_latency;
    j["seed"] = o.seed;
    return j;
}

int cmd_simulate(SimulateOptions& o, CLI::App* cmd,
                 const std::string& command_line)
{
    ConfigFile cfg;
    if (!o.config_path.empty())
        cfg.load(o.config_path);
    Resolver r{cmd, &cfg};
    r.text("scheme", "scheme", o.scheme);
    r.number("n", "n", o.n);
    r.number("l", "l", o.l);
    r.number("k", "k", o.k);
    r.number("salt", "salt", o.salt);
    r.text("backend", "backend", o.backend);
    r.number("oracle-seed", "oracle_seed", o.oracle_seed);
    r.number("exchange-ms", "exchange_ms", o.exchange_ms);
    r.number("backoff-ms", "backoff_ms", o.backoff_ms);
    r.number("background-rate", "background_rate", o.background_rate);
    r.number("duration-s", "duration_s", o.duration_s);
    r.text("book", "book", o.book);
    r.number("m", "m", o.m);
    r.number("book-param", "book_param", o.book_param);
    r.number("message-bits", "message_bits", o.message_bits);
    r.text("topology", "topology", o.topology);
    r.number("cells", "cells", o.cells);
    r.number("hop-latency", "hop_latency", o.hop_latency);
    r.number("seed", "seed", o.seed);
    cfg.reject_unknown_keys();

    const sparrow_scheme_params scheme = scheme_params_from(o);
    if (o.message_bits == 0)
        o.message_bits = static_cast<uint64_t>(scheme.n_bits) * 100;

    BookHandle book;
    build_book(o, scheme, book);

    sparrow_sim_params sim{};
    sim.scheme = scheme;
    sim.exchange_ms = o.exchange_ms;
    sim.backoff_ms = o.backoff_ms;
    sim.background_rate = o.background_rate;
    sim.duration_s = o.duration_s;
    sim.seed = o.seed;

    char* report_json = nullptr;
    if (o.topology == "single") {
        check(sparrow_run_session(&sim, book.book, o.message_bits, &report_json));
    } else {
        int mode = -1;
        if (o.topology == "parallel")
            mode = 1;
        else if (o.topology == "relay")
            mode = 2;
        else
            fail(2, "unknown topology: " + o.topology +
                        " (expected single|parallel|relay)");
        if (o.cells < 1)
            fail(2, "--cells must be >= 1");
        std::vector<sparrow_sim_params> cells(static_cast<size_t>(o.cells), sim);
        std::vector<int> latencies(static_cast<size_t>(o.cells > 0 ? o.cells - 1 : 0),
                                   o.hop_latency);
        check(sparrow_run_topology(mode, cells.data(), o.cells,
                                   latencies.empty() ? nullptr : latencies.data(),
                                   book.book, o.message_bits, o.seed,
                                   &report_json));
    }

    ordered_json out;
    out["tool"] = sparrow_version();
    out["command"] = command_line;
    out["config"] = simulate_config_json(o);
    out["report"] = ordered_json::parse(take_string(report_json));
    write_atomic(o.out, out.dump(2) + "\n");
    return 0;
}

// ---------------------------------------------------------------------------
// attack-demo
// ---------------------------------------------------------------------------

struct DemoOptions {
    std::string mode;
    uint64_t trials = 10000;
    uint64_t seed = 0;
    int n = 8;
    int k = 4;
    int m = 2;
    int d = 5;
    int repeats = 8;
    int unsalted_bits = 40;
    int unsalted_m = 8;
    int salted_bits = 16;
    int salted_k = 4;
    int salted_salt = 64;
    int salted_m = 4;
    std::string out = "-";
    std::string config_path;
};

int cmd_attack_demo(DemoOptions& o, CLI::App* cmd, const std::string& command_line)
{
    ConfigFile cfg;
    if (!o.config_path.empty())
        cfg.load(o.config_path);
    Resolver r{cmd, &cfg};
    r.text("mode", "mode", o.mode);
    r.number("trials", "trials", o.trials);
    r.number("seed", "seed", o.seed);
    r.number("n", "n", o.n);
    r.number("k", "k", o.k);
    r.number("m", "m", o.m);
    r.number("d", "d", o.d);
    r.number("repeats", "repeats", o.repeats);
    r.number("unsalted-bits", "unsalted_bits", o.unsalted_bits);
    r.number("unsalted-m", "unsalted_m", o.unsalted_m);
    r.number("salted-bits", "salted_bits", o.salted_bits);
    r.number("salted-k", "salted_k", o.salted_k);
    r.number("salted-salt", "salted_salt", o.salted_salt);
    r.number("salted-m", "salted_m", o.salted_m);
    cfg.reject_unknown_keys();

    char* report_json = nullptr;
    ordered_json config;
    config["mode"] = o.mode;
    config["trials"] = o.trials;
    config["seed"] = o.seed;
    if (o.mode == "preimage") {
        config["unsalted_bits"] = o.unsalted_bits;
        config["unsalted_m"] = o.unsalted_m;
        config["salted_bits"] = o.salted_bits;
        config["salted_k"] = o.salted_k;
        config["salted_salt"] = o.salted_salt;
        config["salted_m"] = o.salted_m;
        check(sparrow_demo_preimage(o.trials, o.seed, o.unsalted_bits,
                                    o.unsalted_m, o.salted_bits, o.salted_k,
                                    o.salted_salt, o.salted_m, &report_json));
    } else if (o.mode == "repetition") {
        config["n"] = o.n;
        config["k"] = o.k;
        config["repeats"] = o.repeats;
        check(sparrow_demo_repetition(o.n, o.k, o.repeats, o.trials, o.seed,
                                      &report_json));
    } else if (o.mode == "mindist") {
        config["n"] = o.n;
        config["m"] = o.m;
        config["d"] = o.d;
        config["k"] = o.k;
        check(sparrow_demo_mindist(o.n, o.m, o.d, o.k, o.trials, o.seed,
                                   &report_json));
    } else {
        fail(2, "unknown attack-demo mode: " + o.mode +
                    " (expected preimage|repetition|mindist)");
    }

    ordered_json out;
    out["tool"] = sparrow_version();
    out["command"] = command_line;
    out["config"] = config;
    out["report"] = ordered_json::parse(take_string(report_json));
    write_atomic(o.out, out.dump(2) + "\n");
    return 0;
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

struct SweepOptions {
    std::string metric = "pc";
    std::string scheme = "kerasures";
    int n = 12;
    int l = 0;
    int salt = 64;
    std::string backend = "crypto";
    int m = 4;
    int k_from = 0;
    int k_to = 12;
    uint64_t trials = 100000;
    uint64_t seed = 0;
    std::string out = "-";
    std::string config_path;
};

int cmd_sweep(SweepOptions& o, CLI::App* cmd, const std::string& command_line)
{
    ConfigFile cfg;
    if (!o.config_path.empty())
        cfg.load(o.config_path);
    Resolver r{cmd, &cfg};
    r.text("metric", "metric", o.metric);
    r.text("scheme", "scheme", o.scheme);
    r.number("n", "n", o.n);
    r.number("l", "l", o.l);
    r.number("salt", "salt", o.salt);
    r.text("backend", "backend", o.backend);
    r.number("m", "m", o.m);
    r.number("k-from", "k_from", o.k_from);
    r.number("k-to", "k_to", o.k_to);
    r.number("trials", "trials", o.trials);
    r.number("seed", "seed", o.seed);
    cfg.reject_unknown_keys();

    const int variant = variant_from_name(o.scheme);
    const int l = o.l == 0 ? o.n : o.l;
    if (o.k_from < 0 || o.k_to < o.k_from)
        fail(2, "sweep needs 0 <= k-from <= k-to");

    std::ostringstream body;
    if (o.metric == "pc") {
        if (variant == SPARROW_SCHEME_PLAIN)
            fail(2, "pc sweep needs a k-parameterized scheme");
        body << "k,closed_form_pc,mc_pc,mc_ci_low,mc_ci_high\n";
        for (int k = o.k_from; k <= o.k_to; ++k) {
            double closed, l2;
            if (variant == SPARROW_SCHEME_KERRORS)
                check(sparrow_pc_kerrors(o.n, k, &closed, &l2));
            else if (variant == SPARROW_SCHEME_KERASURES)
                check(sparrow_pc_kerasures(o.n, k, &closed, &l2));
            else
                check(sparrow_pc_elisha(l, k, &closed, &l2));
            sparrow_scheme_params p{};
            p.variant = variant;
            p.n_bits = o.n;
            p.l_bits = variant == SPARROW_SCHEME_ELISHA ? l : 0;
            p.k = k;
            p.salt_bits = variant == SPARROW_SCHEME_ELISHA ? o.salt : 0;
            p.backend = backend_from_name(o.backend);
            double mc, lo, hi;
            check(sparrow_estimate_pc_mc(&p, o.trials,
                                         o.seed + static_cast<uint64_t>(k), &mc,
                                         &lo, &hi));
            body << k << ',' << format_double(closed) << ',' << format_double(mc)
                 << ',' << format_double(lo) << ',' << format_double(hi) << "\n";
        }
    } else if (o.metric == "pd") {
        if (variant != SPARROW_SCHEME_ELISHA)
            fail(2, "pd sweep is defined for the elisha scheme");
        body << "k,closed_form_pd,mc_pd,mc_ci_low,mc_ci_high\n";
        for (int k = o.k_from; k <= o.k_to; ++k) {
            double closed;
            check(sparrow_pd_elisha(l, k, o.m, &closed));
            sparrow_scheme_params p{};
            p.variant = variant;
            p.n_bits = o.n;
            p.l_bits = l;
            p.k = k;
            p.salt_bits = o.salt;
            p.backend = backend_from_name(o.backend);
            double mc, lo, hi;
            check(sparrow_pd_montecarlo(&p, o.m, o.trials,
                                        o.seed + static_cast<uint64_t>(k), &mc,
                                        &lo, &hi));
            body << k << ',' << format_double(closed) << ',' << format_double(mc)
                 << ',' << format_double(lo) << ',' << format_double(hi) << "\n";
        }
    } else {
        fail(2, "unknown sweep metric: " + o.metric + " (expected pc|pd)");
    }

    write_atomic(o.out, csv_preamble(command_line, o.seed) + body.str());
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    std::string command_line = "sparrow_cli";
    for (int i = 1; i < argc; ++i)
        command_line += std::string(" ") + argv[i];

    CLI::App app{"SPARROW covert-channel laboratory"};
    app.require_subcommand(1);

    // figure
    CLI::App* figure = app.add_subcommand(
        "figure", "Emit a protection/performance curve as CSV");
    std::string figure_name;
    std::string figure_out;
    uint64_t figure_seed = 0;
    figure->add_option("--name", figure_name, "pc-ker|m-pb|pc-pb|m-pc");
    figure->add_option("--out", figure_out, "output CSV path ('-' = stdout)")
        ->required();
    figure->add_option("--seed", figure_seed, "echoed in the CSV comment line");

    // simulate
    SimulateOptions sim_opts;
    CLI::App* simulate =
        app.add_subcommand("simulate", "Run a covert-session simulation");
    simulate->add_option("--scheme", sim_opts.scheme,
                         "plain|kerrors|kerasures|elisha");
    simulate->add_option("--n", sim_opts.n, "identity bits");
    simulate->add_option("--l", sim_opts.l, "digest bits (elisha; 0 = n)");
    simulate->add_option("--k", sim_opts.k, "errors/erasures per broadcast");
    simulate->add_option("--salt", sim_opts.salt, "salt bits (elisha)");
    simulate->add_option("--backend", sim_opts.backend, "crypto|perm|oracle");
    simulate->add_option("--oracle-seed", sim_opts.oracle_seed,
                         "random-oracle stub seed");
    simulate->add_option("--exchange-ms", sim_opts.exchange_ms,
                         "RA exchange duration");
    simulate->add_option("--backoff-ms", sim_opts.backoff_ms, "back-off time");
    simulate->add_option("--background-rate", sim_opts.background_rate,
                         "mean background contenders per slot");
    simulate->add_option("--duration-s", sim_opts.duration_s,
                         "simulated time budget");
    simulate->add_option("--book", sim_opts.book,
                         "full|random|mindist|tagged");
    simulate->add_option("--m", sim_opts.m, "codebook bits per word");
    simulate->add_option("--book-param", sim_opts.book_param,
                         "min distance d or tag bits");
    simulate->add_option("--message-bits", sim_opts.message_bits,
                         "covert message size (0 = 100 chunks)");
    simulate->add_option("--topology", sim_opts.topology,
                         "single|parallel|relay");
    simulate->add_option("--cells", sim_opts.cells, "cell count");
    simulate->add_option("--hop-latency", sim_opts.hop_latency,
                         "relay latency per hop, in attempts");
    simulate->add_option("--seed", sim_opts.seed, "simulation seed");
    simulate->add_option("--out", sim_opts.out, "report path ('-' = stdout)");
    simulate->add_option("--config", sim_opts.config_path,
                         "key=value config file");

    // attack-demo
    DemoOptions demo_opts;
    CLI::App* demo = app.add_subcommand(
        "attack-demo", "Run an adversary strategy demonstration");
    demo->add_option("--mode", demo_opts.mode, "preimage|repetition|mindist");
    demo->add_option("--trials", demo_opts.trials, "Monte Carlo trials");
    demo->add_option("--seed", demo_opts.seed, "demo seed");
    demo->add_option("--n", demo_opts.n, "identity bits");
    demo->add_option("--k", demo_opts.k, "errors/erasures per broadcast");
    demo->add_option("--m", demo_opts.m, "codebook bits per word");
    demo->add_option("--d", demo_opts.d, "minimum pairwise distance");
    demo->add_option("--repeats", demo_opts.repeats, "repetition count");
    demo->add_option("--unsalted-bits", demo_opts.unsalted_bits,
                     "identity/digest bits, unsalted phase");
    demo->add_option("--unsalted-m", demo_opts.unsalted_m,
                     "codebook bits, unsalted phase");
    demo->add_option("--salted-bits", demo_opts.salted_bits,
                     "identity/digest bits, salted phase");
    demo->add_option("--salted-k", demo_opts.salted_k, "erasures, salted phase");
    demo->add_option("--salted-salt", demo_opts.salted_salt,
                     "salt bits, salted phase");
    demo->add_option("--salted-m", demo_opts.salted_m,
                     "codebook bits, salted phase");
    demo->add_option("--out", demo_opts.out, "report path ('-' = stdout)");
    demo->add_option("--config", demo_opts.config_path, "key=value config file");

    // sweep
    SweepOptions sweep_opts;
    CLI::App* sweep = app.add_subcommand(
        "sweep", "Closed form vs Monte Carlo over a K range, as CSV");
    sweep->add_option("--metric", sweep_opts.metric, "pc|pd");
    sweep->add_option("--scheme", sweep_opts.scheme,
                      "kerrors|kerasures|elisha");
    sweep->add_option("--n", sweep_opts.n, "identity bits");
    sweep->add_option("--l", sweep_opts.l, "digest bits (elisha; 0 = n)");
    sweep->add_option("--salt", sweep_opts.salt, "salt bits (elisha)");
    sweep->add_option("--backend", sweep_opts.backend, "crypto|perm|oracle");
    sweep->add_option("--m", sweep_opts.m, "codebook bits (pd metric)");
    sweep->add_option("--k-from", sweep_opts.k_from, "first K");
    sweep->add_option("--k-to", sweep_opts.k_to, "last K");
    sweep->add_option("--trials", sweep_opts.trials, "Monte Carlo trials per K");
    sweep->add_option("--seed", sweep_opts.seed, "base seed");
    sweep->add_option("--out", sweep_opts.out, "output CSV path ('-' = stdout)");
    sweep->add_option("--config", sweep_opts.config_path,
                      "key=value config file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) // --help
            return app.exit(e);
        app.exit(e);
        return 2;
    }

    try {
        if (figure->parsed()) {
            if (figure_name.empty())
                fail(2, "figure needs --name");
            return cmd_figure(figure, command_line);
        }
        if (simulate->parsed())
            return cmd_simulate(sim_opts, simulate, command_line);
        if (demo->parsed()) {
            if (demo_opts.mode.empty() && demo_opts.config_path.empty())
                fail(2, "attack-demo needs --mode");
            return cmd_attack_demo(demo_opts, demo, command_line);
        }
        if (sweep->parsed())
            return cmd_sweep(sweep_opts, sweep, command_line);
        fail(2, "no subcommand given");
    } catch (const CliError& e) {
        std::fprintf(stderr, "error: %s\n", e.message.c_str());
        return e.exit_code;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
