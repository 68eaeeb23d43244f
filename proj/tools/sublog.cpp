#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "sublog/bench.hpp"
#include "sublog/core.hpp"
#include "sublog/distributions.hpp"
#include "sublog/io.hpp"
#include "sublog/pca.hpp"
#include "sublog/rda.hpp"
#include "sublog/rds.hpp"

namespace {

using namespace sublog;

std::vector<std::size_t> parse_n_list(const std::string& s) {
    std::vector<std::size_t> ns;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        auto comma = s.find(',', pos);
        if (comma == std::string::npos) comma = s.size();
        const std::string item = s.substr(pos, comma - pos);
        if (item.empty()) throw UsageError("empty entry in --n list");
        try {
            ns.push_back(std::stoull(item));
        } catch (const std::exception&) {
            throw UsageError("bad entry '" + item + "' in --n list");
        }
        pos = comma + 1;
    }
    if (ns.empty()) throw UsageError("--n list is empty");
    return ns;
}

SortedKeyArray load_data(const std::string& path, bool raw) {
    if (raw) return normalize(read_raw_key_file(path));
    return SortedKeyArray::from_sorted(read_norm_key_file(path), 0.0, 1.0);
}

int cmd_generate(const std::string& dist, std::size_t n, std::uint64_t seed,
                 const std::string& out) {
    if (n < 1) throw UsageError("--n must be positive");
    const CdfModel model = CdfModel::parse(dist);
    const SortedKeyArray a = sample_sorted(model, n, seed);
    write_norm_key_file(out, a.keys());
    std::cout << "wrote " << n << " keys to " << out << "\n";
    return 0;
}

int cmd_build(const std::string& method, const std::string& data, bool raw, double eps, double rho,
              double ratio, const std::string& out) {
    const SortedKeyArray a = load_data(data, raw);
    std::ofstream os(out, std::ios::binary | std::ios::trunc);
    if (!os) throw IoFailure("cannot create '" + out + "'");
    if (method == "pca") {
        const PcaIndex idx = build_pca(a, eps, rho);
        write_pcf(os, idx.model());
        std::cout << "pca index: " << idx.size_ints() << " stored integers\n";
    } else if (method == "rda") {
        const RdaIndex idx = rda_build(a, ratio);
        write_rda(os, idx);
        std::cout << "rda index: " << rda_size_ints(idx) << " stored integers\n";
    } else {
        throw UsageError("only pca and rda indexes have on-disk form, got '" + method + "'");
    }
    os.flush();
    if (!os) throw IoFailure("write to '" + out + "' failed");
    return 0;
}

int cmd_query(const std::string& method, const std::string& index_path, const std::string& data,
              bool raw, double q, const std::string& dist, double eps, double rho, double ratio) {
    const SortedKeyArray a = load_data(data, raw);
    OpContext ctx;
    Rank rank = 0;
    if (method == "binary") {
        rank = binary_search_rank(a, q, 1, a.size(), ctx);
    } else if (method == "rds") {
        rank = rds_search(a, q, CdfModel::parse(dist), ctx);
    } else if (method == "pca") {
        if (index_path.empty()) {
            rank = build_pca(a, eps, rho).query(q, ctx);
        } else {
            std::ifstream is(index_path, std::ios::binary);
            if (!is) throw IoFailure("cannot open '" + index_path + "'");
            rank = PcaIndex(read_pcf(is), a).query(q, ctx);
        }
    } else if (method == "rda") {
        if (index_path.empty()) {
            rank = rda_query(rda_build(a, ratio), q, ctx);
        } else {
            std::ifstream is(index_path, std::ios::binary);
            if (!is) throw IoFailure("cannot open '" + index_path + "'");
            rank = rda_query(read_rda(is, a), q, ctx);
        }
    } else {
        throw UsageError("unknown method '" + method + "'");
    }
    std::cout << "rank=" << rank << " ops=" << ctx.mem_ops << "\n";
    return 0;
}

void apply_config_file(const std::string& path, ExperimentConfig& cfg) {
    std::ifstream in(path);
    if (!in) throw IoFailure("cannot open config '" + path + "'");
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw UsageError("expected key=value in config: '" + line + "'");
        const std::string key = line.substr(0, eq);
        const std::string val = line.substr(eq + 1);
        try {
            if (key == "method") cfg.method = parse_method(val);
            else if (key == "dist") cfg.dist = val;
            else if (key == "dataset") cfg.dataset = val;
            else if (key == "n") cfg.ns = parse_n_list(val);
            else if (key == "eps") cfg.eps = std::stod(val);
            else if (key == "rho") cfg.rho = std::stod(val);
            else if (key == "ratio") cfg.ratio = std::stod(val);
            else if (key == "queries") cfg.queries = std::stoull(val);
            else if (key == "arrays") cfg.arrays = std::stoull(val);
            else if (key == "seed") cfg.seed = std::stoull(val);
            else if (key == "verify") cfg.verify = val != "0" && val != "false";
            else if (key == "timing") cfg.timing = val != "0" && val != "false";
            else if (key == "threads") cfg.threads = std::stoi(val);
            else throw UsageError("unknown config key '" + key + "'");
        } catch (const UsageError&) {
            throw;
        } catch (const std::exception&) {
            throw UsageError("bad value for config key '" + key + "': '" + val + "'");
        }
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Learned rank indexes over sorted arrays, with an operation-count harness"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "Sample a distribution into a normalized key file");
    std::string g_dist = "uniform", g_out;
    std::size_t g_n = 0;
    std::uint64_t g_seed = 1;
    gen->add_option("--dist", g_dist, "uniform | power:t=T | gauss:mu=M,sigma=S | empirical:PATH");
    gen->add_option("--n", g_n, "number of keys")->required();
    gen->add_option("--seed", g_seed, "rng seed");
    gen->add_option("--out", g_out, "output key file")->required();

    // build
    auto* bld = app.add_subcommand("build", "Build an index file over a key file");
    std::string b_method, b_data, b_out;
    bool b_raw = false;
    double b_eps = 0.1, b_rho = 1.0, b_ratio = 1.0;
    bld->add_option("--method", b_method, "pca | rda")->required();
    bld->add_option("--data", b_data, "key file")->required();
    bld->add_flag("--raw", b_raw, "treat --data as raw unsigned keys and normalize");
    bld->add_option("--eps", b_eps, "pca space parameter");
    bld->add_option("--rho", b_rho, "pca density bound");
    bld->add_option("--ratio", b_ratio, "rda density ratio");
    bld->add_option("--out", b_out, "output index file")->required();

    // query
    auto* qry = app.add_subcommand("query", "Answer one rank query");
    std::string q_method = "binary", q_index, q_data, q_dist = "uniform";
    bool q_raw = false;
    double q_q = 0.0, q_eps = 0.1, q_rho = 1.0, q_ratio = 1.0;
    qry->add_option("--method", q_method, "binary | pca | rds | rda");
    qry->add_option("--index", q_index, "index file (pca/rda); built on the fly when absent");
    qry->add_option("--data", q_data, "key file")->required();
    qry->add_flag("--raw", q_raw, "treat --data as raw unsigned keys and normalize");
    qry->add_option("--q", q_q, "query point")->required();
    qry->add_option("--dist", q_dist, "distribution spec (rds)");
    qry->add_option("--eps", q_eps, "pca space parameter");
    qry->add_option("--rho", q_rho, "pca density bound");
    qry->add_option("--ratio", q_ratio, "rda density ratio");

    // bench
    auto* ben = app.add_subcommand("bench", "Run an operation-count sweep and write CSV");
    ExperimentConfig cfg;
    std::string n_list, method_name_str, config_path, csv_out;
    bool no_verify = false, no_timing = false;
    ben->add_option("--config", config_path, "key=value config file; flags override");
    auto* opt_method = ben->add_option("--method", method_name_str, "binary | pca | rds | rda");
    auto* opt_dist = ben->add_option("--dist", cfg.dist, "distribution spec");
    auto* opt_dataset = ben->add_option("--dataset", cfg.dataset, "raw key file to subsample");
    auto* opt_n = ben->add_option("--n", n_list, "comma-separated array sizes");
    auto* opt_eps = ben->add_option("--eps", cfg.eps, "pca space parameter");
    auto* opt_rho = ben->add_option("--rho", cfg.rho, "pca density bound (0 = from the model)");
    auto* opt_ratio = ben->add_option("--ratio", cfg.ratio, "rda density ratio");
    auto* opt_queries = ben->add_option("--queries", cfg.queries, "queries per array");
    auto* opt_arrays = ben->add_option("--arrays", cfg.arrays, "arrays per configuration");
    auto* opt_seed = ben->add_option("--seed", cfg.seed, "rng seed");
    auto* opt_threads = ben->add_option("--threads", cfg.threads, "worker cap (0 = auto)");
    ben->add_flag("--no-verify", no_verify, "skip per-answer exactness checks");
    ben->add_flag("--no-timing", no_timing, "report build_seconds as 0 for reproducible bytes");
    ben->add_option("--out", csv_out, "output CSV path")->required();

    // report
    auto* rep = app.add_subcommand("report", "Pretty-print a bench CSV");
    std::string r_in;
    rep->add_option("--in", r_in, "CSV path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (gen->parsed()) return cmd_generate(g_dist, g_n, g_seed, g_out);
        if (bld->parsed()) return cmd_build(b_method, b_data, b_raw, b_eps, b_rho, b_ratio, b_out);
        if (qry->parsed()) {
            return cmd_query(q_method, q_index, q_data, q_raw, q_q, q_dist, q_eps, q_rho, q_ratio);
        }
        if (ben->parsed()) {
            if (!config_path.empty()) {
                // File first, explicit flags override.
                ExperimentConfig merged;
                apply_config_file(config_path, merged);
                if (opt_dist->count()) merged.dist = cfg.dist;
                if (opt_dataset->count()) merged.dataset = cfg.dataset;
                if (opt_eps->count()) merged.eps = cfg.eps;
                if (opt_rho->count()) merged.rho = cfg.rho;
                if (opt_ratio->count()) merged.ratio = cfg.ratio;
                if (opt_queries->count()) merged.queries = cfg.queries;
                if (opt_arrays->count()) merged.arrays = cfg.arrays;
                if (opt_seed->count()) merged.seed = cfg.seed;
                if (opt_threads->count()) merged.threads = cfg.threads;
                cfg = merged;
            }
            if (opt_method->count()) cfg.method = parse_method(method_name_str);
            if (opt_n->count()) cfg.ns = parse_n_list(n_list);
            if (no_verify) cfg.verify = false;
            if (no_timing) cfg.timing = false;
            if (cfg.ns.empty()) throw UsageError("bench needs --n (or an n= config line)");
            const auto rows = run_experiment(cfg);
            write_csv(rows, csv_out);
            std::cout << format_table(rows);
            return 0;
        }
        if (rep->parsed()) {
            std::cout << format_table(read_csv(r_in));
            return 0;
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
