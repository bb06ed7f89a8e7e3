#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "irsa/cli.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

namespace fs = std::filesystem;

namespace {

int run(const std::vector<std::string>& args) {
    std::vector<const char*> argv;
    argv.push_back("irsa");
    for (const auto& a : args) argv.push_back(a.c_str());
    return irsa::run_cli(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream body;
    body << in.rdbuf();
    return body.str();
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line))
        if (!line.empty()) lines.push_back(line);
    return lines;
}

// Scratch directory with a small scenario; fast enough to simulate in tests.
struct Workspace {
    fs::path dir;

    Workspace() {
        dir = fs::temp_directory_path() / "irsa_cli_scratch";
        fs::create_directories(dir);
        write("small.cfg",
              "# compact test scenario\n"
              "num_devices      = 40\n"
              "frame_length     = 10\n"
              "update_prob      = 0.02\n"
              "battery_capacity = 2\n"
              "harvest_prob     = 0.2\n"
              "max_degree       = 2\n"
              "adaptive         = true\n"
              "degree_table     = 1, 0, 0;  0, 1, 0;  0, 0, 1\n");
        write("flat.cfg",
              "num_devices      = 40\n"
              "frame_length     = 10\n"
              "update_prob      = 0.02\n"
              "battery_capacity = 2\n"
              "harvest_prob     = 0.2\n"
              "max_degree       = 2\n"
              "degree_table     = 0, 0, 1\n");
    }

    ~Workspace() {
        std::error_code ec;
        fs::remove_all(dir, ec);
    }

    fs::path write(const std::string& name, const std::string& text) {
        fs::path p = dir / name;
        std::ofstream out(p, std::ios::binary);
        out << text;
        return p;
    }

    std::string path(const std::string& name) const { return (dir / name).string(); }
};

const char* kCsvHeader =
    "alphaU,G,scheme,plr,throughput,avg_aoi_norm,avp_theta,plr_lower_bound,seed,frames";

}  // namespace

TEST_CASE("simulate writes a deterministic CSV row") {
    Workspace ws;
    std::vector<std::string> args = {"simulate",       "--config", ws.path("small.cfg"),
                                     "--scheme",       "avoid",    "--frames",
                                     "200",            "--warmup", "20",
                                     "--seed",         "5",        "--out",
                                     ws.path("a.csv")};
    REQUIRE(run(args) == 0);
    args.back() = ws.path("b.csv");
    REQUIRE(run(args) == 0);

    const std::string a = slurp(ws.dir / "a.csv");
    CHECK(a == slurp(ws.dir / "b.csv"));

    auto rows = lines_of(a);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0] == kCsvHeader);
    // Fields: alphaU and scheme should echo the scenario.
    std::stringstream fields(rows[1]);
    std::string alpha_u, g, scheme;
    std::getline(fields, alpha_u, ',');
    std::getline(fields, g, ',');
    std::getline(fields, scheme, ',');
    CHECK(alpha_u == "0.8");
    CHECK(scheme == "avoid");
    CHECK(rows[1].substr(rows[1].size() - 4) == ",200");  // frames column

    // A different seed must change the measurements.
    args = {"simulate", "--config", ws.path("small.cfg"), "--scheme", "avoid",
            "--frames", "200",      "--warmup",           "20",       "--seed",
            "6",        "--out",    ws.path("c.csv")};
    REQUIRE(run(args) == 0);
    CHECK(slurp(ws.dir / "c.csv") != a);
}

TEST_CASE("simulate with a zero-frame budget emits only the header") {
    Workspace ws;
    REQUIRE(run({"simulate", "--config", ws.path("small.cfg"), "--frames", "0", "--out",
                 ws.path("empty.csv")}) == 0);
    auto rows = lines_of(slurp(ws.dir / "empty.csv"));
    REQUIRE(rows.size() == 1);
    CHECK(rows[0] == kCsvHeader);
}

TEST_CASE("simulate exports the full report as JSON") {
    Workspace ws;
    REQUIRE(run({"simulate", "--config", ws.path("small.cfg"), "--scheme", "identify",
                 "--frames", "150", "--warmup", "10", "--seed", "3", "--out",
                 ws.path("row.csv"), "--json", ws.path("report.json")}) == 0);
    auto j = nlohmann::json::parse(slurp(ws.dir / "report.json"));
    CHECK(j["frames"].get<long>() == 150);
    CHECK(j["num_devices"].get<int>() == 40);
    CHECK(j.contains("battery_distribution"));
    CHECK(j.contains("plr"));
}

TEST_CASE("analyze reports the battery chain for the avoid scheme") {
    Workspace ws;
    REQUIRE(run({"analyze", "--config", ws.path("small.cfg"), "--scheme", "avoid", "--pe", "0.1",
                 "--out", ws.path("analysis.json")}) == 0);
    auto j = nlohmann::json::parse(slurp(ws.dir / "analysis.json"));
    CHECK(j["scheme"] == "avoid");
    CHECK(j["alpha_u"].get<double>() == doctest::Approx(0.8));
    auto phi = j["phi"].get<std::vector<double>>();
    REQUIRE(phi.size() == 3);
    double total = 0;
    for (double p : phi) total += p;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(j["transition_matrix"].size() == 3);
    CHECK(j["plr_lower_bound"].get<double>() >= 0.0);
    // The loss-rate input unlocks the age formulas.
    CHECK(j.contains("average_aoi"));
    CHECK(j.contains("aoi_violation_prob"));
    CHECK(j["throughput"].get<double>() > 0.0);
}

TEST_CASE("analyze for identify requires an empirical battery distribution") {
    Workspace ws;
    CHECK(run({"analyze", "--config", ws.path("flat.cfg"), "--scheme", "identify"}) == 1);

    // Chained workflow: simulate --json first, then feed the report back.
    REQUIRE(run({"simulate", "--config", ws.path("flat.cfg"), "--scheme", "identify", "--frames",
                 "200", "--warmup", "20", "--out", ws.path("row.csv"), "--json",
                 ws.path("report.json")}) == 0);
    REQUIRE(run({"analyze", "--config", ws.path("flat.cfg"), "--scheme", "identify", "--phi-from",
                 ws.path("report.json"), "--out", ws.path("id.json")}) == 0);
    auto j = nlohmann::json::parse(slurp(ws.dir / "id.json"));
    CHECK(j["phi_source"].get<std::string>() == ws.path("report.json"));
    CHECK(j["phi"].get<std::vector<double>>().size() == 3);
    CHECK(j["plr_lower_bound"].get<double>() > 0.0);
}

TEST_CASE("bad inputs exit with the config-error status") {
    Workspace ws;
    CHECK(run({"simulate", "--config", ws.path("missing.cfg")}) == 1);
    CHECK(run({"simulate", "--config", ws.path("small.cfg"), "--scheme", "psychic"}) == 1);
    // CLI parse failures (unknown subcommand) are reported by the parser.
    CHECK(run({"frobnicate"}) != 0);
    CHECK(run({}) != 0);
}

TEST_CASE("sweep emits one row per grid point in grid order") {
    Workspace ws;
    REQUIRE(run({"sweep", "--config", ws.path("small.cfg"), "--scheme", "avoid", "--sweep",
                 "alphaU=0.2,0.5,0.8", "--frames", "120", "--warmup", "10", "--seed", "2",
                 "--jobs", "1", "--out", ws.path("sweep.csv")}) == 0);
    auto rows = lines_of(slurp(ws.dir / "sweep.csv"));
    REQUIRE(rows.size() == 4);
    CHECK(rows[0] == kCsvHeader);
    CHECK(rows[1].substr(0, 4) == "0.2,");
    CHECK(rows[2].substr(0, 4) == "0.5,");
    CHECK(rows[3].substr(0, 4) == "0.8,");

    // Deterministic: the same invocation byte-matches.
    REQUIRE(run({"sweep", "--config", ws.path("small.cfg"), "--scheme", "avoid", "--sweep",
                 "alphaU=0.2,0.5,0.8", "--frames", "120", "--warmup", "10", "--seed", "2",
                 "--jobs", "1", "--out", ws.path("sweep2.csv")}) == 0);
    CHECK(slurp(ws.dir / "sweep.csv") == slurp(ws.dir / "sweep2.csv"));
}

TEST_CASE("sweep validates its grid specification") {
    Workspace ws;
    CHECK(run({"sweep", "--config", ws.path("small.cfg"), "--sweep", "alphaU=0.8,0.2",
               "--frames", "50"}) == 1);  // must be ascending
    CHECK(run({"sweep", "--config", ws.path("small.cfg"), "--sweep", "bogus=1,2",
               "--frames", "50"}) == 1);
    CHECK(run({"sweep", "--config", ws.path("small.cfg"), "--sweep", "alphaU=",
               "--frames", "50"}) == 1);
}

TEST_CASE("sweeping the battery capacity reshapes only full-spend tables") {
    Workspace ws;
    // The full-spend monomial reshapes to each capacity.
    REQUIRE(run({"sweep", "--config", ws.path("small.cfg"), "--scheme", "avoid", "--sweep",
                 "E=1,2,3", "--frames", "80", "--warmup", "10", "--jobs", "1", "--out",
                 ws.path("esweep.csv")}) == 0);
    CHECK(lines_of(slurp(ws.dir / "esweep.csv")).size() == 4);

    // Any other adaptive table has no defined reshape and is rejected.
    ws.write("other.cfg",
             "num_devices = 40\nframe_length = 10\nupdate_prob = 0.02\n"
             "battery_capacity = 2\nharvest_prob = 0.2\nmax_degree = 2\n"
             "adaptive = true\n"
             "degree_table = 1, 0, 0;  0.5, 0.5, 0;  0, 0, 1\n");
    CHECK(run({"sweep", "--config", ws.path("other.cfg"), "--scheme", "avoid", "--sweep",
               "E=1,2", "--frames", "50"}) == 1);
}

TEST_CASE("sweep reports per-point failures but keeps the good rows") {
    Workspace ws;
    // etaM=20 needs a per-slot harvest probability of 2: invalid config.
    CHECK(run({"sweep", "--config", ws.path("small.cfg"), "--scheme", "avoid", "--sweep",
               "etaM=1,20", "--frames", "80", "--warmup", "10", "--jobs", "1", "--out",
               ws.path("partial.csv")}) == 2);
    auto rows = lines_of(slurp(ws.dir / "partial.csv"));
    REQUIRE(rows.size() == 2);  // header + the one valid point
    CHECK(rows[0] == kCsvHeader);
}

TEST_CASE("optimize emits a deterministic JSON summary") {
    Workspace ws;
    std::vector<std::string> args = {
        "optimize",     "--config",      ws.path("flat.cfg"), "--scheme",   "identify",
        "--objective",  "throughput",    "--restarts",        "1",          "--eval-frames",
        "60",           "--final-frames", "120",              "--eval-warmup", "10",
        "--seed",       "11",            "--jobs",            "1",          "--out",
        ws.path("opt_a.json")};
    REQUIRE(run(args) == 0);
    args.back() = ws.path("opt_b.json");
    REQUIRE(run(args) == 0);
    CHECK(slurp(ws.dir / "opt_a.json") == slurp(ws.dir / "opt_b.json"));

    auto j = nlohmann::json::parse(slurp(ws.dir / "opt_a.json"));
    CHECK(j["scheme"] == "identify");
    CHECK(j["objective"] == "throughput");
    CHECK(j["restart_values"].size() == 2);
    auto table = j["distribution"]["table"].get<std::vector<std::vector<double>>>();
    REQUIRE(table.size() == 1);
    double total = 0;
    for (double p : table[0]) total += p;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));

    // The unlimited scheme has nothing to optimize.
    CHECK(run({"optimize", "--config", ws.path("flat.cfg"), "--scheme", "unlimited",
               "--restarts", "1", "--eval-frames", "40", "--final-frames", "40"}) == 1);
}
