#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sublog/core.hpp"
#include "sublog/distributions.hpp"

namespace sublog {

enum class Method { Binary, Pca, Rds, Rda };

Method parse_method(const std::string& name);  // throws UsageError
std::string method_name(Method m);

struct ExperimentConfig {
    Method method = Method::Binary;
    std::string dist = "uniform";  // distribution spec string
    std::string dataset;           // raw key file; when set, arrays are subsamples of it
    std::vector<std::size_t> ns;
    double eps = 0.1;    // pca space parameter
    double rho = 0.0;    // pca density bound; 0 = take the model's declared bound
    double ratio = 1.0;  // rda density ratio
    std::size_t queries = 1000;
    std::size_t arrays = 100;
    std::uint64_t seed = 1;
    bool verify = true;   // check every answer against the exact rank
    bool timing = true;   // record wall-clock build time (off for reproducible output)
    int threads = 0;      // 0 = auto; SUBLOG_THREADS caps
};

struct BenchRow {
    std::string method;
    std::string dist;
    std::size_t n = 0;
    double metric_ops = 0.0;          // max over queries of mean over arrays
    std::size_t index_size_ints = 0;  // mean stored integers across arrays
    double build_seconds = 0.0;       // mean per-array build time
    bool exactness_checked = false;   // true: zero oracle mismatches across all probes
};

/// count i.i.d. uniform draws on [lo, hi], deterministic per seed.
/// Throws InvalidRange when lo >= hi.
std::vector<double> gen_queries(double lo, double hi, std::size_t count, std::uint64_t seed);

/// Uniform without-replacement subsample of size n from a raw key file,
/// normalized onto [0, 1]. Throws BadHeader / TruncatedFile / NTooLarge.
SortedKeyArray load_real(const std::string& path, std::size_t n, std::uint64_t seed);

/// The reported metric: max over queries of the per-query mean across
/// arrays. ops[q][a] is the operation count of query q on array a.
double max_of_means(const std::vector<std::vector<std::uint64_t>>& ops);

/// Runs the configured sweep: per n, draws the query set and the arrays,
/// builds the index per array, runs every query with a fresh context,
/// verifies answers, and emits one row. Rows are sorted by
/// (method, dist, n). Any verification mismatch throws
/// ExactnessViolation.
std::vector<BenchRow> run_experiment(const ExperimentConfig& cfg);

/// Metric row for the recursive distribution search over explicit array
/// and query sets.
BenchRow rds_expected_ops(const std::vector<SortedKeyArray>& arrays,
                          const std::vector<double>& queries, const CdfModel& base);

/// CSV with header method,dist,n,metric_ops,index_size_ints,build_seconds.
/// Reals are written in shortest round-trip form.
void write_csv(const std::vector<BenchRow>& rows, const std::string& path);
std::vector<BenchRow> read_csv(const std::string& path);
std::string csv_string(const std::vector<BenchRow>& rows);

/// Fixed-width summary table for terminal output.
std::string format_table(const std::vector<BenchRow>& rows);

}  // namespace sublog
