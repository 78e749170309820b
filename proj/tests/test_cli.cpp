#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

// End-to-end checks against the installed binary. The test runner passes
// the binary and fixture locations through the environment.

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::string& bin() {
    static std::string path = [] {
        const char* p = std::getenv("MINPOWER_NET_BIN");
        REQUIRE_MESSAGE(p != nullptr, "MINPOWER_NET_BIN not set");
        return std::string(p);
    }();
    return path;
}

fs::path fixture(const std::string& name) {
    const char* p = std::getenv("MINPOWER_FIXTURES");
    REQUIRE_MESSAGE(p != nullptr, "MINPOWER_FIXTURES not set");
    return fs::path(p) / name;
}

const fs::path& work_dir() {
    static fs::path dir = [] {
        fs::path d =
            fs::temp_directory_path() / ("minpower_cli_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct RunResult {
    int code = -1;
    std::string out;
    std::string err;
};

RunResult run_prefixed(const std::string& env_prefix, const std::string& args) {
    static int counter = 0;
    fs::path out = work_dir() / ("stdout" + std::to_string(counter) + ".txt");
    fs::path err = work_dir() / ("stderr" + std::to_string(counter) + ".txt");
    ++counter;
    std::string cmd = env_prefix + bin() + " " + args + " > " + out.string() + " 2> " +
                      err.string();
    int rc = std::system(cmd.c_str());
    RunResult r;
    r.code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

RunResult run(const std::string& args) { return run_prefixed("", args); }

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

using EdgeSet = std::set<std::pair<int, int>>;

EdgeSet edge_set(const json& edges) {
    EdgeSet s;
    for (const auto& e : edges) s.insert({e[0].get<int>(), e[1].get<int>()});
    return s;
}

} // namespace

TEST_CASE("generate writes reproducible scenarios") {
    fs::path a = work_dir() / "gen_a.json";
    fs::path b = work_dir() / "gen_b.json";
    std::string flags =
        "generate --seed 3 --count 12 --width 300 --height 300 --n 2 --range 150 -o ";
    CHECK(run(flags + a.string()).code == 0);
    CHECK(run(flags + b.string()).code == 0);
    std::string text = slurp(a);
    CHECK_FALSE(text.empty());
    CHECK(text == slurp(b));

    json j = json::parse(text);
    CHECK(j["version"] == 1);
    CHECK(j["scenario"]["count"] == 12);
    CHECK(j["scenario"]["model"]["p_max"] == doctest::Approx(150.0 * 150.0));
    CHECK_FALSE(j.contains("nodes"));

    fs::path c = work_dir() / "gen_c.json";
    CHECK(run(flags + c.string() + " --emit-nodes").code == 0);
    json withnodes = json::parse(slurp(c));
    REQUIRE(withnodes.contains("nodes"));
    CHECK(withnodes["nodes"].size() == 12);  // sensors only, sink not embedded
}

TEST_CASE("usage and feasibility failures use distinct exit codes") {
    CHECK(run("").code == 2);                          // missing subcommand
    CHECK(run("generate --no-such-flag").code == 2);   // unknown flag
    CHECK(run("generate --range 100 --p-max 5").code == 2);  // mutually exclusive
    CHECK(run("topo /nonexistent/scenario.json").code == 2);
    CHECK(run("simulate " + fixture("e2_vs_emin.json").string() + " --duration -1").code == 2);
    // 2 sensors in a huge field with a tiny range never connect
    CHECK(run("generate --count 2 --width 2000 --height 2000 --range 10 -o -").code == 3);
    CHECK(run("--help").code == 0);
}

TEST_CASE("topo separates the redundancy filter from the minimal set") {
    fs::path out = work_dir() / "topo_fixture.json";
    auto r = run("topo " + fixture("e2_vs_emin.json").string() +
                 " --methods e2,emin --no-sink -o " + out.string());
    CHECK(r.code == 0);

    json j = json::parse(slurp(out));
    EdgeSet e2 = edge_set(j["methods"]["e2"]["edges"]);
    EdgeSet emin = edge_set(j["methods"]["emin"]["edges"]);
    CHECK(e2.size() == 8);
    CHECK(emin.size() == 6);
    for (const auto& e : emin) CHECK(e2.count(e) == 1);
    EdgeSet dropped;
    for (const auto& e : e2)
        if (!emin.count(e)) dropped.insert(e);
    CHECK(dropped == EdgeSet{{0, 1}, {1, 0}});
}

TEST_CASE("topo flip order changes the mecn neighborhood") {
    auto neighbors_of_node0 = [&](const std::string& extra) {
        fs::path out = work_dir() / ("topo_order" + std::to_string(std::rand()) + ".json");
        auto r = run("topo " + fixture("order_fixture.json").string() + " --no-sink " + extra +
                     " -o " + out.string());
        REQUIRE(r.code == 0);
        json j = json::parse(slurp(out));
        const json& methods = j["methods"];
        const json& per = methods.begin().value()["per_node"];
        return per[0]["neighbors"].get<std::vector<int>>();
    };

    CHECK(neighbors_of_node0("--methods mecn --flip-order by-id") == std::vector<int>{3});
    CHECK(neighbors_of_node0("--methods mecn --flip-order by-distance") ==
          std::vector<int>{1, 3});
    CHECK(neighbors_of_node0("--methods smecn") == std::vector<int>{3});
}

TEST_CASE("verify passes intact graphs and flags sabotaged ones") {
    auto ok = run("verify " + fixture("e2_vs_emin.json").string() + " --method smecn");
    CHECK(ok.code == 0);
    CHECK(ok.out.find("PASS") != std::string::npos);
    CHECK(ok.out.find("FAIL") == std::string::npos);

    auto bad = run("verify " + fixture("e2_vs_emin.json").string() +
                   " --method emin --drop-edge 0,2");
    CHECK(bad.code == 1);
    CHECK(bad.out.find("FAIL") != std::string::npos);

    CHECK(run("verify " + fixture("e2_vs_emin.json").string() + " --drop-edge nonsense")
              .code == 2);
}

TEST_CASE("simulate snapshot goes to stdout") {
    auto r = run("simulate " + fixture("e2_vs_emin.json").string() + " --duration 0 -o -");
    CHECK(r.code == 0);
    auto lines = lines_of(r.out);
    REQUIRE(lines.size() == 2);
    CHECK(lines[0] ==
          "time,alive,sink_connected,mean_degree,mean_power,packets_delivered,"
          "energy_consumed_mean,mean_hops");
    CHECK(lines[1].substr(0, 6) == "0,4,4,");
}

TEST_CASE("simulate reruns are byte-identical and traceable") {
    fs::path f1 = work_dir() / "sim1.csv";
    fs::path f2 = work_dir() / "sim2.csv";
    fs::path tr = work_dir() / "sim.trace.csv";
    std::string base = "simulate " + fixture("order_fixture.json").string() + " --duration 40 ";
    CHECK(run(base + "-o " + f1.string()).code == 0);
    CHECK(run(base + "-o " + f2.string() + " --trace " + tr.string()).code == 0);
    std::string csv = slurp(f1);
    CHECK_FALSE(csv.empty());
    CHECK(csv == slurp(f2));
    auto trace_lines = lines_of(slurp(tr));
    REQUIRE_FALSE(trace_lines.empty());
    CHECK(trace_lines[0] == "time,kind,nodes");
}

TEST_CASE("sampling resolution can come from the environment") {
    std::string topo = "topo " + fixture("e2_vs_emin.json").string() + " --methods e2 -o -";
    CHECK(run_prefixed("MINPOWER_SAMPLING=2048,256 ", topo).code == 0);
    CHECK(run_prefixed("MINPOWER_SAMPLING=48,16 ", topo).code == 2);   // below the floor
    CHECK(run_prefixed("MINPOWER_SAMPLING=garbage ", topo).code == 2);
}

TEST_CASE("compare runs both protocols per seed") {
    fs::path out = work_dir() / "cmp.csv";
    auto r = run("compare " + fixture("order_fixture.json").string() +
                 " --seeds 1 --duration 30 -o " + out.string());
    CHECK(r.code == 0);
    auto lines = lines_of(slurp(out));
    REQUIRE(lines.size() == 2);
    CHECK(lines[0].substr(0, 5) == "seed,");
    CHECK(lines[1].substr(0, 2) == "1,");
    CHECK(r.out.find("smecn") != std::string::npos);

    CHECK(run("compare " + fixture("order_fixture.json").string() + " --seeds 5..2").code == 2);
}
