#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "shatterlab/cli.hpp"
#include "shatterlab/io.hpp"
#include "zoo.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace shatterlab;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string fixture(const std::string& name) { return std::string(SHATTERLAB_FIXTURES) + "/" + name; }

std::string temp_file(const std::string& name, const std::string& content) {
    const fs::path dir = fs::temp_directory_path() / "shatterlab_cli_tests";
    fs::create_directories(dir);
    const fs::path p = dir / name;
    std::ofstream(p) << content;
    return p.string();
}

std::string trim(std::string s) {
    while (!s.empty() && (s.back() == '\n' || s.back() == ' ')) s.pop_back();
    return s;
}

}  // namespace

TEST_CASE("documented examples") {
    auto dim = run({"sys", "dim", "--kind", "thicket", fixture("thresholds3.json")});
    CHECK(dim.code == 0);
    CHECK(trim(dim.out) == R"({"dimension":2})");

    auto maxsol = run({"ban", "maxsol", "--n", "4", "--k", "2"});
    CHECK(maxsol.code == 0);
    CHECK(trim(maxsol.out) == R"({"max_solutions":11,"min_hitting":5})");

    auto audit = run({"sys", "audit", "--s", "2", "--r", "2", "--n", "3", "--inject-false-bound", fixture("powerset3.json")});
    CHECK(audit.code == 1);
    CHECK(audit.err.find("FAIL") != std::string::npos);
    CHECK(audit.out.find("injected") != std::string::npos);

    auto clean = run({"sys", "audit", "--s", "2", "--r", "2", "--n", "3", fixture("powerset3.json")});
    CHECK(clean.code == 0);
}

TEST_CASE("exit code matrix") {
    struct Case {
        std::vector<std::string> args;
        int code;
        std::string err_fragment;
    };
    const std::string bad_bits = temp_file("bad_bits.json", R"({"universe":2,"sets":["01","0x"]})");
    const std::string truncated = temp_file("truncated.json", "{\"universe\":2,\n");
    const std::string bad_tree = temp_file("bad_tree.json", R"({"":1,"1":0,"0":2})");
    const std::string p3 = temp_file("p3.json", R"({"vertices":3,"edges":[[0,1],[1,2]]})");
    const std::vector<Case> cases = {
        {{"sys", "dim", fixture("powerset3.json")}, 0, ""},
        {{"--bogus", "sys", "dim", fixture("powerset3.json")}, 2, "argument"},
        {{"sys", "dim", "--kind", "nope", fixture("powerset3.json")}, 2, ""},
        {{"sys", "dim", "/nonexistent/file.json"}, 2, "nonexistent"},
        {{"sys", "dim", bad_bits}, 2, "/sets/1"},
        {{"sys", "dim", truncated}, 2, "line 2"},
        {{"frobnicate"}, 2, ""},
        {{"--cap", "2", "ban", "solve", fixture("parity3.json")}, 3, "sequence_log2"},
        {{"--cap", "2", "sys", "dim", "--kind", "vc", fixture("atmost4_2.json")}, 3, "vc_universe"},
        {{"ban", "hereditary", fixture("parity3.json")}, 0, ""},
        {{"ban", "reduce", "--kind", "counting", fixture("parity3.json")}, 2, "k >= 2"},
        {{"graph", "typetree", "--validate", bad_tree, p3}, 1, "condition (1)"},
        {{"graph", "treerank", p3}, 0, ""},
        {{"geom", "regions", "--r", "2", "--s", "3"}, 0, ""},
        {{"geom", "cells", "--random", "5", "--seed", "3"}, 0, ""},
        {{"--help"}, 0, ""},
        {{"mc", "weaklaw", "--uniform", "4", "--set", "11", "--n", "5", "--epsilon", "1/4"}, 2, ""},
        {{"mc", "weaklaw", "--uniform", "4", "--set", "1100", "--n", "5", "--epsilon", "1/4", "--trials", "20"}, 0, ""},
    };
    for (const auto& c : cases) {
        std::string joined;
        for (const auto& a : c.args) joined += a + " ";
        CAPTURE(joined);
        auto r = run(c.args);
        CHECK(r.code == c.code);
        if (!c.err_fragment.empty()) CHECK(r.err.find(c.err_fragment) != std::string::npos);
    }
}

TEST_CASE("cap from the environment") {
    ::setenv("SHATTERLAB_CAP", "2", 1);
    auto r = run({"ban", "solve", fixture("parity3.json")});
    ::unsetenv("SHATTERLAB_CAP");
    CHECK(r.code == 3);
    CHECK(run({"ban", "solve", fixture("parity3.json")}).code == 0);
}

TEST_CASE("serialization conventions") {
    const std::string empty = temp_file("empty.json", R"({"universe":2,"sets":[]})");
    CHECK(trim(run({"sys", "dim", "--kind", "vc", empty}).out) == R"({"dimension":"-inf"})");
    auto ex = run({"mc", "expect", "--uniform", "2", "--set", "10", "--n", "3"});
    CHECK(ex.code == 0);
    CHECK(trim(ex.out) == R"({"expectation":"1/2","measure":"1/2","equal":true})");

    auto solve = run({"ban", "solve", fixture("parity3.json")});
    auto j = io::parse_json(solve.out, "stdout");
    CHECK(j["solution_count"] == 4);
    CHECK(j["solutions"] == io::Json::array({"000", "011", "101", "110"}));
    auto csv = run({"--format", "csv", "ban", "solve", fixture("parity3.json")});
    CHECK(csv.out == "000\n011\n101\n110\n");

    auto weak = run({"--format", "csv", "--quiet", "mc", "weaklaw", "--uniform", "4", "--set", "1100", "--n", "20",
                     "--epsilon", "1/4", "--trials", "3", "--seed", "1"});
    CHECK(weak.out.rfind("trial,n,epsilon,deviation,exceeded\n", 0) == 0);
    CHECK(weak.err.empty());
}

TEST_CASE("round trips") {
    for (const auto& F : zoo::fixtures()) {
        auto j = io::to_json(F);
        CHECK(io::set_system_from_json(io::parse_json(j.dump(), "rt")) == F);
    }
    auto gen = run({"sys", "gen", "--kind", "thresholds", "--n", "3"});
    CHECK(io::set_system_from_json(io::parse_json(gen.out, "gen")) == gen::thresholds(3));

    auto ban = run({"ban", "gen", "--generator", "random", "--n", "5", "--k", "2", "--j", "3", "--density", "0.3",
                    "--seed", "8"});
    REQUIRE(ban.code == 0);
    auto f = io::relaxed_ban_problem_from_json(io::parse_json(ban.out, "ban"));
    auto again = io::to_json(f);
    CHECK(again.dump() == io::parse_json(ban.out, "ban").dump());
    const std::string saved = temp_file("ban.json", ban.out);
    auto s1 = run({"ban", "solve", saved});
    CHECK(s1.code == 0);

    auto graph = run({"graph", "gen", "--kind", "random", "--n", "12", "--p", "0.4", "--seed", "5"});
    auto G = io::graph_from_json(io::parse_json(graph.out, "graph"));
    CHECK(io::graph_from_json(io::to_json(G)) == G);
    const std::string gfile = temp_file("g.json", graph.out);
    auto tt = run({"graph", "typetree", gfile});
    auto T = io::type_tree_from_json(io::parse_json(tt.out, "tt"));
    CHECK(T == build_type_tree(G));
    const std::string tfile = temp_file("t.json", tt.out);
    CHECK(run({"graph", "typetree", "--validate", tfile, gfile}).code == 0);

    auto rep = run({"mc", "vcthm", "--uniform", "3", "--system", fixture("thresholds3.json"), "--n", "10",
                    "--epsilon", "1/2", "--trials", "30", "--seed", "2"});
    auto rj = io::parse_json(rep.out, "report");
    CHECK(io::parse_json(rj.dump(), "again") == rj);
    CHECK(rj["rho_source"] == "exact");

    ProbSpace sp({Rational(1, 2), Rational(1, 4), Rational(1, 4)});
    auto sj = io::to_json(sp);
    CHECK(io::prob_space_from_json(sj).weights() == sp.weights());
}

TEST_CASE("identical argv gives identical stdout") {
    const std::vector<std::vector<std::string>> commands = {
        {"--seed", "4", "mc", "weaklaw", "--uniform", "8", "--set", "11110000", "--n", "30", "--epsilon", "1/5",
         "--trials", "200"},
        {"--seed", "4", "--format", "csv", "mc", "vcthm", "--uniform", "4", "--system", fixture("intervals4.json"),
         "--n", "10", "--epsilon", "1/3", "--trials", "100"},
        {"--seed", "9", "graph", "gen", "--kind", "random", "--n", "20", "--p", "0.3"},
        {"--seed", "9", "ban", "gen", "--generator", "random_dense", "--n", "4", "--k", "2", "--keep", "1"},
        {"--seed", "2", "geom", "cells", "--random", "6"},
    };
    for (const auto& argv : commands) {
        auto a = run(argv), b = run(argv);
        CHECK(a.code == 0);
        CHECK(a.out == b.out);
        CHECK_FALSE(a.out.empty());
    }
    auto t1 = run({"--seed", "4", "--threads", "1", "mc", "weaklaw", "--uniform", "8", "--set", "11110000", "--n", "30",
                   "--epsilon", "1/5", "--trials", "200"});
    auto t3 = run({"--seed", "4", "--threads", "3", "mc", "weaklaw", "--uniform", "8", "--set", "11110000", "--n", "30",
                   "--epsilon", "1/5", "--trials", "200"});
    CHECK(t1.out == t3.out);
}
