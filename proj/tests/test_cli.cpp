#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

struct CliResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

CliResult run_cli(const std::string& args) {
    static int counter = 0;
    const fs::path out = fs::path("cli_out_" + std::to_string(counter) + ".txt");
    const fs::path err = fs::path("cli_err_" + std::to_string(counter) + ".txt");
    ++counter;
    const std::string cmd =
        std::string(PROVFAAS_CLI_PATH) + " " + args + " > " + out.string() + " 2> " + err.string();
    const int status = std::system(cmd.c_str());
    CliResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

const std::string kData = PROVFAAS_DATA_DIR;
const std::string kConfig = kData + "/default.toml";
const std::string kTrace = kData + "/sample_trace.jsonl";

}  // namespace

TEST_CASE("cli: run on the bundled trace exits 0 and reports three intervals") {
    const CliResult r = run_cli("run --config " + kConfig + " --log " + kTrace + " --out-dir cli_run1");
    CHECK_MESSAGE(r.exit_code == 0, r.err);
    CHECK(r.out.find("intervals: 3") != std::string::npos);
    for (const char* name : {"latency.csv", "summary.json", "alerts.jsonl", "packing.txt", "report.json"})
        CHECK_MESSAGE(fs::exists(fs::path("cli_run1") / name), name);
}

TEST_CASE("cli: identical reruns produce byte-identical outputs and stdout") {
    const CliResult a = run_cli("run --config " + kConfig + " --log " + kTrace + " --out-dir cli_det_a");
    const CliResult b = run_cli("run --config " + kConfig + " --log " + kTrace + " --out-dir cli_det_b");
    REQUIRE(a.exit_code == 0);
    REQUIRE(b.exit_code == 0);
    CHECK(a.out == b.out);
    for (const char* name : {"latency.csv", "summary.json", "alerts.jsonl", "packing.txt", "report.json"})
        CHECK_MESSAGE(slurp(fs::path("cli_det_a") / name) == slurp(fs::path("cli_det_b") / name), name);
}

TEST_CASE("cli: outputs match the committed golden files") {
    const CliResult r = run_cli("run --config " + kConfig + " --log " + kTrace + " --out-dir cli_golden");
    REQUIRE_MESSAGE(r.exit_code == 0, r.err);
    const fs::path golden = fs::path(kData) / "golden";
    REQUIRE_MESSAGE(fs::exists(golden), "data/golden must be committed");
    for (const char* name : {"latency.csv", "summary.json", "report.json"}) {
        const std::string expect = slurp(golden / name);
        const std::string got = slurp(fs::path("cli_golden") / name);
        CHECK_MESSAGE(got == expect, "golden mismatch for ", name);
    }
}

TEST_CASE("cli: k-layer mismatch exits 2 with every violation listed") {
    {
        std::ofstream os("cli_bad.toml");
        os << "[provgraph]\nk_layers = 2\n[partitioner]\nk_hops = 3\n[gnn]\nk_layers = 4\n";
    }
    const CliResult r = run_cli("run --config cli_bad.toml --log " + kTrace);
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("k_hops") != std::string::npos);
    CHECK(r.err.find("gnn.k_layers") != std::string::npos);
}

TEST_CASE("cli: empty log is a successful zero-interval run") {
    {
        std::ofstream os("cli_empty.jsonl");
    }
    const CliResult r = run_cli("run --config " + kConfig + " --log cli_empty.jsonl");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("intervals: 0") != std::string::npos);
}

TEST_CASE("cli: missing log file is a runtime error, exit 1") {
    const CliResult r = run_cli("run --config " + kConfig + " --log nope_does_not_exist.jsonl");
    CHECK(r.exit_code == 1);
}

TEST_CASE("cli: gen-workload writes a deterministic replay csv") {
    const CliResult a = run_cli("gen-workload --config " + kConfig + " --out cli_wl_a.csv");
    const CliResult b = run_cli("gen-workload --config " + kConfig + " --out cli_wl_b.csv");
    REQUIRE(a.exit_code == 0);
    REQUIRE(b.exit_code == 0);
    const std::string csv = slurp("cli_wl_a.csv");
    CHECK(csv.rfind("interval,units_embed_cost_total,units_gnn_edges_total", 0) == 0);
    CHECK(csv == slurp("cli_wl_b.csv"));
}

TEST_CASE("cli: build-freqdb then a frequency-filtered run") {
    const CliResult db = run_cli("build-freqdb --log " + kTrace + " --threshold 1 --out cli_freq.tsv");
    REQUIRE_MESSAGE(db.exit_code == 0, db.err);
    CHECK(slurp("cli_freq.tsv").rfind("threshold\t1", 0) == 0);

    {
        std::ofstream os("cli_freq.toml");
        os << "[provgraph]\nfilters.frequency = true\nfreqdb_path = \"cli_freq.tsv\"\n";
    }
    const CliResult r = run_cli("run --config cli_freq.toml --log " + kTrace + " --out-dir cli_freq_run");
    CHECK_MESSAGE(r.exit_code == 0, r.err);
}

TEST_CASE("cli: fit-profile then a run that consumes it") {
    const CliResult fit =
        run_cli("fit-profile --config " + kConfig + " --log " + kTrace + " --out cli_profile.txt");
    REQUIRE_MESSAGE(fit.exit_code == 0, fit.err);
    {
        std::ofstream os("cli_prof.toml");
        os << "[detector]\nprofile_path = \"cli_profile.txt\"\n";
    }
    const CliResult r = run_cli("run --config cli_prof.toml --log " + kTrace);
    CHECK_MESSAGE(r.exit_code == 0, r.err);
}

TEST_CASE("cli: compare prints both modes and the reductions") {
    {
        std::ofstream os("cli_cmp.toml");
        os << "[workload]\nintervals = 40\npoisson = false\n";
    }
    const CliResult r = run_cli("compare --config cli_cmp.toml");
    REQUIRE_MESSAGE(r.exit_code == 0, r.err);
    CHECK(r.out.find("serverless: mean_ms=") != std::string::npos);
    CHECK(r.out.find("static: mean_ms=") != std::string::npos);
    CHECK(r.out.find("reduction: mean=") != std::string::npos);
}

TEST_CASE("cli: oracle subcommands pass and echo failing seeds on demand") {
    const CliResult ok = run_cli("oracle stats --seeds 10");
    CHECK(ok.exit_code == 0);
    CHECK(ok.out.find("[PASS]") != std::string::npos);

    const CliResult packing = run_cli("oracle packing --seeds 5 --max-nodes 200");
    CHECK_MESSAGE(packing.exit_code == 0, packing.out);

    const CliResult gnn = run_cli("oracle gnn-equivalence --seeds 3 --nodes 80");
    CHECK_MESSAGE(gnn.exit_code == 0, gnn.out);
}

TEST_CASE("cli: unknown mode is rejected by argument parsing") {
    const CliResult r = run_cli("run --config " + kConfig + " --log " + kTrace + " --mode turbo");
    CHECK(r.exit_code != 0);
}
