#include <doctest.h>

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "sublog/core.hpp"
#include "sublog/io.hpp"

using namespace sublog;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output;
};

std::string cli_path() {
    const char* p = std::getenv("SUBLOG_CLI");
    REQUIRE_MESSAGE(p != nullptr, "SUBLOG_CLI must point at the built binary");
    return p;
}

RunResult run(const std::string& args) {
    const std::string cmd = cli_path() + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult r;
    std::array<char, 512> buf;
    while (fgets(buf.data(), buf.size(), pipe)) r.output += buf.data();
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string tmp(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("generate writes identical bytes for identical seeds") {
    const auto f1 = tmp("sublog_gen1.keys"), f2 = tmp("sublog_gen2.keys");
    CHECK(run("generate --dist uniform --n 100 --seed 7 --out " + f1).exit_code == 0);
    CHECK(run("generate --dist uniform --n 100 --seed 7 --out " + f2).exit_code == 0);
    CHECK(slurp(f1) == slurp(f2));
    const auto keys = read_norm_key_file(f1);
    CHECK(keys.size() == 100);
    CHECK(std::is_sorted(keys.begin(), keys.end()));
    CHECK(keys.front() >= 0.0);
    CHECK(keys.back() <= 1.0);
    std::remove(f1.c_str());
    std::remove(f2.c_str());
}

TEST_CASE("bad distribution specs are usage errors") {
    CHECK(run("generate --dist gauss:sigma=-1 --n 10 --out " + tmp("x.keys")).exit_code == 2);
    CHECK(run("generate --dist nosuch --n 10 --out " + tmp("x.keys")).exit_code == 2);
    CHECK(run("bench --method nosuch --n 128 --out " + tmp("x.csv")).exit_code == 2);
    CHECK(run("definitely-not-a-subcommand").exit_code == 2);
}

TEST_CASE("query matches the oracle end to end") {
    const auto data = tmp("sublog_qdata.keys");
    REQUIRE(run("generate --dist power:t=4 --n 500 --seed 3 --out " + data).exit_code == 0);
    const auto a = SortedKeyArray::from_sorted(read_norm_key_file(data), 0.0, 1.0);

    for (const std::string method : {"binary", "pca", "rds", "rda"}) {
        for (double q : {0.0, 0.2, 0.734, 0.9999, 1.0}) {
            const auto r = run("query --method " + method + " --data " + data +
                               " --q " + std::to_string(q) +
                               (method == "rds" ? " --dist power:t=4" : ""));
            REQUIRE(r.exit_code == 0);
            const auto want = "rank=" + std::to_string(rank_oracle(a, q));
            CHECK_MESSAGE(r.output.find(want + " ") != std::string::npos,
                          method << " q=" << q << " got: " << r.output);
            CHECK(r.output.find("ops=") != std::string::npos);
        }
    }
    // boundary conventions
    CHECK(run("query --method binary --data " + data + " --q -1").output.find("rank=0 ") == 0);
    CHECK(run("query --method binary --data " + data + " --q 2").output.find("rank=500 ") == 0);
    std::remove(data.c_str());
}

TEST_CASE("build then query through an index file") {
    const auto data = tmp("sublog_bdata.keys");
    REQUIRE(run("generate --dist uniform --n 2000 --seed 9 --out " + data).exit_code == 0);
    const auto a = SortedKeyArray::from_sorted(read_norm_key_file(data), 0.0, 1.0);

    for (const std::string method : {"pca", "rda"}) {
        const auto idx = tmp("sublog_idx_" + method + ".bin");
        REQUIRE(run("build --method " + method + " --data " + data + " --out " + idx).exit_code ==
                0);
        const auto r =
            run("query --method " + method + " --index " + idx + " --data " + data + " --q 0.42");
        REQUIRE(r.exit_code == 0);
        CHECK(r.output.find("rank=" + std::to_string(rank_oracle(a, 0.42)) + " ") !=
              std::string::npos);
        std::remove(idx.c_str());
    }
    // mismatched index and data fail cleanly
    const auto idx = tmp("sublog_idx_mismatch.bin");
    REQUIRE(run("build --method rda --data " + data + " --out " + idx).exit_code == 0);
    const auto other = tmp("sublog_other.keys");
    REQUIRE(run("generate --dist uniform --n 100 --seed 1 --out " + other).exit_code == 0);
    CHECK(run("query --method rda --index " + idx + " --data " + other + " --q 0.5").exit_code ==
          1);
    CHECK(run("build --method binary --data " + data + " --out " + idx).exit_code == 2);
    std::remove(idx.c_str());
    std::remove(other.c_str());
    std::remove(data.c_str());
}

TEST_CASE("bench writes one row per size and a parseable table") {
    const auto csv = tmp("sublog_bench.csv");
    const auto r = run("bench --method binary --dist uniform --n 256,512 --queries 50 --arrays 4 "
                       "--seed 5 --no-timing --out " + csv);
    REQUIRE(r.exit_code == 0);
    const auto text = slurp(csv);
    CHECK(text.find("method,dist,n,metric_ops,index_size_ints,build_seconds\n") == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 3);  // header + 2 rows
    CHECK(run("report --in " + csv).exit_code == 0);
    std::remove(csv.c_str());
}

TEST_CASE("bench config file with flag overrides") {
    const auto conf = tmp("sublog_bench.conf");
    {
        std::ofstream out(conf);
        out << "method=binary\nn=128\nqueries=20\narrays=2\nseed=11\ntiming=0\n";
    }
    const auto csv1 = tmp("sublog_b1.csv"), csv2 = tmp("sublog_b2.csv");
    REQUIRE(run("bench --config " + conf + " --out " + csv1).exit_code == 0);
    // flag overrides the file's n
    REQUIRE(run("bench --config " + conf + " --n 64 --out " + csv2).exit_code == 0);
    CHECK(slurp(csv1).find(",128,") != std::string::npos);
    CHECK(slurp(csv2).find(",64,") != std::string::npos);
    std::remove(conf.c_str());
    std::remove(csv1.c_str());
    std::remove(csv2.c_str());
}

TEST_CASE("bench bytes are identical across runs with equal seeds") {
    const auto c1 = tmp("sublog_det1.csv"), c2 = tmp("sublog_det2.csv");
    const std::string args = "bench --method rda --dist uniform --n 512 --queries 40 --arrays 6 "
                             "--seed 21 --no-timing --out ";
    REQUIRE(run(args + c1).exit_code == 0);
    REQUIRE(run(args + c2).exit_code == 0);
    CHECK(slurp(c1) == slurp(c2));
    std::remove(c1.c_str());
    std::remove(c2.c_str());
}

}  // TEST_SUITE
