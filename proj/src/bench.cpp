#include "sublog/bench.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>
#include <tuple>

#include "sublog/io.hpp"
#include "sublog/pca.hpp"
#include "sublog/rda.hpp"
#include "sublog/rds.hpp"
#include "sublog/rng.hpp"

namespace sublog {

namespace {

constexpr std::uint64_t kQueryStream = 0x71;
constexpr std::uint64_t kArrayStream = 0xA0;

std::string shortest(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        throw BadHeader("bad numeric field '" + s + "' in CSV");
    }
    return v;
}

std::size_t resolve_threads(int requested, std::size_t jobs) {
    std::size_t t = requested > 0 ? static_cast<std::size_t>(requested)
                                  : std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("SUBLOG_THREADS")) {
        char* end = nullptr;
        const long cap = std::strtol(env, &end, 10);
        if (end && *end == '\0' && cap > 0) t = std::min(t, static_cast<std::size_t>(cap));
    }
    return std::max<std::size_t>(1, std::min(t, jobs));
}

struct ArrayResult {
    std::size_t size_ints = 0;
    double build_seconds = 0.0;
};

/// Runs all queries for one array, filling its column of the op matrix.
template <typename Query>
void run_queries(const SortedKeyArray& a, const std::vector<double>& queries, bool verify,
                 std::size_t col, std::vector<std::vector<std::uint64_t>>& ops, Query&& query) {
    OpContext ctx;
    for (std::size_t qi = 0; qi < queries.size(); ++qi) {
        ctx.reset();
        const Rank got = query(queries[qi], ctx);
        ops[qi][col] = ctx.mem_ops;
        if (verify && got != exact_rank(a, queries[qi])) {
            throw ExactnessViolation("query " + shortest(queries[qi]) + " returned " +
                                     std::to_string(got) + ", expected " +
                                     std::to_string(exact_rank(a, queries[qi])));
        }
    }
}

}  // namespace

Method parse_method(const std::string& name) {
    if (name == "binary") return Method::Binary;
    if (name == "pca") return Method::Pca;
    if (name == "rds") return Method::Rds;
    if (name == "rda") return Method::Rda;
    throw UsageError("unknown method '" + name + "' (expected binary|pca|rds|rda)");
}

std::string method_name(Method m) {
    switch (m) {
        case Method::Binary: return "binary";
        case Method::Pca: return "pca";
        case Method::Rds: return "rds";
        case Method::Rda: return "rda";
    }
    return "?";
}

std::vector<double> gen_queries(double lo, double hi, std::size_t count, std::uint64_t seed) {
    if (!(lo < hi)) throw InvalidRange("query range is empty");
    std::vector<double> qs(count);
    auto gen = make_engine(seed);
    for (auto& q : qs) q = lo + next_unit(gen) * (hi - lo);
    return qs;
}

SortedKeyArray load_real(const std::string& path, std::size_t n, std::uint64_t seed) {
    const std::vector<std::uint64_t> all = read_raw_key_file(path);
    if (n < 2) throw NTooLarge("subsample size must be at least 2");
    if (n > all.size()) {
        throw NTooLarge("subsample of " + std::to_string(n) + " from a file of " +
                        std::to_string(all.size()) + " keys");
    }
    // Partial Fisher-Yates over an index vector: uniform without replacement.
    std::vector<std::uint64_t> pool = all;
    auto gen = make_engine(seed);
    std::vector<std::uint64_t> picked(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(gen() % (pool.size() - i));
        std::swap(pool[i], pool[j]);
        picked[i] = pool[i];
    }
    return normalize(picked);
}

double max_of_means(const std::vector<std::vector<std::uint64_t>>& ops) {
    double best = 0.0;
    for (const auto& row : ops) {
        const std::uint64_t sum = std::accumulate(row.begin(), row.end(), std::uint64_t{0});
        best = std::max(best, static_cast<double>(sum) / static_cast<double>(row.size()));
    }
    return best;
}

std::vector<BenchRow> run_experiment(const ExperimentConfig& cfg) {
    if (cfg.queries < 1) throw InvalidRange("need at least one query");
    if (cfg.arrays < 1) throw InvalidRange("need at least one array");
    for (std::size_t n : cfg.ns) {
        if (n < 2) throw InvalidRange("n must be at least 2");
    }
    if (cfg.ns.empty()) throw InvalidRange("no array sizes given");

    const bool real_data = !cfg.dataset.empty();
    CdfModel model = real_data ? CdfModel::uniform() : CdfModel::parse(cfg.dist);
    if (real_data && cfg.method == Method::Rds) {
        throw UsageError("rds needs an evaluable distribution; datasets provide none");
    }
    double rho = cfg.rho;
    if (cfg.method == Method::Pca && rho <= 0.0) {
        if (real_data) throw UsageError("pca on a dataset needs an explicit --rho");
        rho = pdf_bound(model).upper;
    }
    const std::string dist_name = real_data ? "file:" + cfg.dataset : model.name();

    std::vector<BenchRow> rows;
    for (std::size_t n : cfg.ns) {
        const auto queries = gen_queries(0.0, 1.0, cfg.queries, mix_seed(cfg.seed, n, kQueryStream));
        std::vector<std::vector<std::uint64_t>> ops(cfg.queries,
                                                    std::vector<std::uint64_t>(cfg.arrays));
        std::vector<ArrayResult> results(cfg.arrays);

        const std::size_t workers = resolve_threads(cfg.threads, cfg.arrays);
        std::exception_ptr failure;
        std::mutex failure_mu;
        auto work = [&](std::size_t begin, std::size_t end) {
            try {
                for (std::size_t ai = begin; ai < end; ++ai) {
                    const std::uint64_t aseed = mix_seed(cfg.seed, n, kArrayStream + ai);
                    const SortedKeyArray a = real_data ? load_real(cfg.dataset, n, aseed)
                                                       : sample_sorted(model, n, aseed);
                    const auto t0 = std::chrono::steady_clock::now();
                    switch (cfg.method) {
                        case Method::Binary: {
                            results[ai].size_ints = 0;
                            results[ai].build_seconds = 0.0;
                            run_queries(a, queries, cfg.verify, ai, ops,
                                        [&](double q, OpContext& ctx) {
                                            return binary_search_rank(a, q, 1, a.size(), ctx);
                                        });
                            break;
                        }
                        case Method::Pca: {
                            const PcaIndex idx = build_pca(a, cfg.eps, rho);
                            results[ai].build_seconds =
                                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                                    .count();
                            results[ai].size_ints = idx.size_ints();
                            run_queries(a, queries, cfg.verify, ai, ops,
                                        [&](double q, OpContext& ctx) { return idx.query(q, ctx); });
                            break;
                        }
                        case Method::Rds: {
                            results[ai].size_ints = 0;
                            results[ai].build_seconds = 0.0;
                            run_queries(a, queries, cfg.verify, ai, ops,
                                        [&](double q, OpContext& ctx) {
                                            return rds_search(a, q, model, ctx);
                                        });
                            break;
                        }
                        case Method::Rda: {
                            const RdaIndex idx = rda_build(a, cfg.ratio);
                            results[ai].build_seconds =
                                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                                    .count();
                            results[ai].size_ints = rda_size_ints(idx);
                            run_queries(a, queries, cfg.verify, ai, ops,
                                        [&](double q, OpContext& ctx) {
                                            return rda_query(idx, q, ctx);
                                        });
                            break;
                        }
                    }
                }
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mu);
                if (!failure) failure = std::current_exception();
            }
        };

        if (workers == 1) {
            work(0, cfg.arrays);
        } else {
            std::vector<std::thread> pool;
            const std::size_t chunk = (cfg.arrays + workers - 1) / workers;
            for (std::size_t w = 0; w < workers; ++w) {
                const std::size_t begin = w * chunk;
                const std::size_t end = std::min(cfg.arrays, begin + chunk);
                if (begin >= end) break;
                pool.emplace_back(work, begin, end);
            }
            for (auto& t : pool) t.join();
        }
        if (failure) std::rethrow_exception(failure);

        BenchRow row;
        row.method = method_name(cfg.method);
        row.dist = dist_name;
        row.n = n;
        row.metric_ops = max_of_means(ops);
        double size_sum = 0.0, time_sum = 0.0;
        for (const auto& r : results) {
            size_sum += static_cast<double>(r.size_ints);
            time_sum += r.build_seconds;
        }
        row.index_size_ints =
            static_cast<std::size_t>(std::llround(size_sum / static_cast<double>(cfg.arrays)));
        row.build_seconds = cfg.timing ? time_sum / static_cast<double>(cfg.arrays) : 0.0;
        row.exactness_checked = cfg.verify;
        rows.push_back(std::move(row));
    }

    std::sort(rows.begin(), rows.end(), [](const BenchRow& x, const BenchRow& y) {
        return std::tie(x.method, x.dist, x.n) < std::tie(y.method, y.dist, y.n);
    });
    return rows;
}

BenchRow rds_expected_ops(const std::vector<SortedKeyArray>& arrays,
                          const std::vector<double>& queries, const CdfModel& base) {
    if (arrays.empty() || queries.empty()) throw InvalidRange("need arrays and queries");
    std::vector<std::vector<std::uint64_t>> ops(queries.size(),
                                                std::vector<std::uint64_t>(arrays.size()));
    OpContext ctx;
    for (std::size_t ai = 0; ai < arrays.size(); ++ai) {
        for (std::size_t qi = 0; qi < queries.size(); ++qi) {
            ctx.reset();
            rds_search(arrays[ai], queries[qi], base, ctx);
            ops[qi][ai] = ctx.mem_ops;
        }
    }
    BenchRow row;
    row.method = "rds";
    row.dist = base.name();
    row.n = arrays.front().size();
    row.metric_ops = max_of_means(ops);
    row.index_size_ints = 0;
    row.exactness_checked = false;
    return row;
}

std::string csv_string(const std::vector<BenchRow>& rows) {
    std::ostringstream out;
    out << "method,dist,n,metric_ops,index_size_ints,build_seconds\n";
    for (const auto& r : rows) {
        out << r.method << ',' << r.dist << ',' << r.n << ',' << shortest(r.metric_ops) << ','
            << r.index_size_ints << ',' << shortest(r.build_seconds) << '\n';
    }
    return out.str();
}

void write_csv(const std::vector<BenchRow>& rows, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoFailure("cannot create '" + path + "'");
    out << csv_string(rows);
    out.flush();
    if (!out) throw IoFailure("write to '" + path + "' failed");
}

std::vector<BenchRow> read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoFailure("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line) || line != "method,dist,n,metric_ops,index_size_ints,build_seconds") {
        throw BadHeader("unexpected CSV header in '" + path + "'");
    }
    std::vector<BenchRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::array<std::string, 6> fields;
        std::size_t field = 0, pos = 0;
        while (field < 5) {
            const auto comma = line.find(',', pos);
            if (comma == std::string::npos) throw BadHeader("short CSV row: '" + line + "'");
            fields[field++] = line.substr(pos, comma - pos);
            pos = comma + 1;
        }
        fields[5] = line.substr(pos);
        BenchRow r;
        r.method = fields[0];
        r.dist = fields[1];
        r.n = static_cast<std::size_t>(parse_double(fields[2]));
        r.metric_ops = parse_double(fields[3]);
        r.index_size_ints = static_cast<std::size_t>(parse_double(fields[4]));
        r.build_seconds = parse_double(fields[5]);
        rows.push_back(std::move(r));
    }
    return rows;
}

std::string format_table(const std::vector<BenchRow>& rows) {
    std::ostringstream out;
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%-8s %-24s %10s %12s %16s %14s\n", "method", "dist", "n",
                  "metric_ops", "index_size_ints", "build_seconds");
    out << buf;
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof(buf), "%-8s %-24s %10zu %12.3f %16zu %14.6f\n", r.method.c_str(),
                      r.dist.c_str(), r.n, r.metric_ops, r.index_size_ints, r.build_seconds);
        out << buf;
    }
    return out.str();
}

}  // namespace sublog
