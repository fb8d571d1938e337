#include "support/corpus.hpp"
#include "support/workspace.hpp"

#include "cli/app.hpp"
#include "dspectrum/dchain.hpp"
#include "dspectrum/io.hpp"

#include <doctest.h>
#include <json.hpp>

#include <sstream>

using namespace dspectrum;
using namespace dspectrum::testing;
using dspectrum::cli::run;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome invoke(const std::vector<std::string>& args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("usage errors") {
    CHECK(invoke({}).code == cli::kUsage);
    CHECK(invoke({"bogus"}).code == cli::kUsage);
    CHECK(invoke({"spectrum"}).code == cli::kUsage);
    CHECK(invoke({"--help"}).code == cli::kOk);
    Workspace ws("cli-usage");
    CHECK(invoke({"spectrum", "--input", ws.file("missing.txt"), "--out-dir", ws.path().string()}).code ==
          cli::kUsage);
    auto input = ws.write_graph("p3.txt", path(3));
    CHECK(invoke({"sir", "--input", input, "--out-dir", ws.path().string(), "--h-list", "1,0.5"}).code ==
          cli::kUsage);
    CHECK(invoke({"analyze", "--out-dir", ws.path().string()}).code == cli::kUsage);
}

TEST_CASE("parse_h_list") {
    CHECK(cli::parse_h_list("0.1,1.5,10") == std::vector<double>{0.1, 1.5, 10});
    CHECK_THROWS_AS(cli::parse_h_list(""), std::invalid_argument);
    CHECK_THROWS_AS(cli::parse_h_list("1,x"), std::invalid_argument);
    CHECK_THROWS_AS(cli::parse_h_list("0,1"), std::invalid_argument);
    CHECK_THROWS_AS(cli::parse_h_list("2,1"), std::invalid_argument);
}

TEST_CASE("spectrum command writes the csv") {
    Workspace ws("cli-spectrum");
    auto input = ws.write("p3.txt", "# path\na b\nb c\n");
    for (const char* method : {"deletion", "fixedpoint", "both"}) {
        auto r = invoke({"spectrum", "--input", input, "--out-dir", ws.path().string(), "--method", method});
        CHECK(r.code == cli::kOk);
        CHECK(ws.read("spectrum.csv") == "node,C_0,C_-1,C_-2\na,1,1,1\nb,1,2,2\nc,1,1,1\n");
    }
    auto ingest = nlohmann::json::parse(ws.read("ingest.json"));
    CHECK(ingest["nodes"] == 3);
    CHECK(ingest["edges_kept"] == 2);
}

TEST_CASE("spectrum command edge cases") {
    Workspace ws("cli-edge");
    auto empty = ws.write("empty.txt", "");
    CHECK(invoke({"spectrum", "--input", empty, "--out-dir", ws.path().string()}).code == cli::kOk);
    CHECK(ws.read("spectrum.csv") == "node,C_0\n");

    auto bad = ws.write("bad.txt", "a b\nb c d\n");
    auto r = invoke({"spectrum", "--input", bad, "--out-dir", ws.path().string()});
    CHECK(r.code == cli::kParse);
    CHECK(r.err.find("line 2") != std::string::npos);

    auto trace = ws.file("trace.jsonl");
    auto p3 = ws.write_graph("p3.txt", path(3));
    CHECK(invoke({"spectrum", "--input", p3, "--out-dir", ws.path().string(), "--method", "fixedpoint", "--trace",
                  trace})
              .code == cli::kOk);
    std::istringstream lines(ws.read("trace.jsonl"));
    std::string line;
    std::size_t count = 0;
    while (std::getline(lines, line)) {
        auto j = nlohmann::json::parse(line);
        CHECK(j.contains("step"));
        CHECK(j.contains("nodes"));
        CHECK(j.contains("states"));
        ++count;
    }
    CHECK(count > 0);
}

TEST_CASE("first_mismatch") {
    DSpectrum a = full_spectrum(path(3));
    CHECK_FALSE(cli::first_mismatch(a, a).has_value());
    DSpectrum b = a;
    b.at(1, 1) = 1;
    auto m = cli::first_mismatch(a, b);
    REQUIRE(m.has_value());
    CHECK(m->node == 1);
    CHECK(m->order == -1);
    CHECK(m->deletion == 2);
    CHECK(m->fixed_point == 1);
    CHECK(cli::kMismatch == 3);
}

TEST_CASE("sir command") {
    Workspace ws("cli-sir");
    auto k4 = ws.write_graph("k4.txt", complete(4));
    const std::string dir1 = ws.file("one");
    const std::string dir2 = ws.file("two");
    CHECK(invoke({"sir", "--input", k4, "--out-dir", dir1, "--runs", "200", "--seed", "7"}).code == cli::kOk);
    CHECK(invoke({"sir", "--input", k4, "--out-dir", dir2, "--runs", "200", "--seed", "7"}).code == cli::kOk);
    CHECK(ws.read("one/profile.csv") == ws.read("two/profile.csv"));

    auto p3 = ws.write_graph("p3.txt", path(3));
    auto r = invoke({"sir", "--input", p3, "--out-dir", ws.path().string(), "--runs", "100"});
    CHECK(r.code == cli::kOk);
    CHECK(r.err.find("clamped") != std::string::npos);
    std::istringstream csv(ws.read("profile.csv"));
    auto table = read_profile_csv(csv);
    // beta = 2 on P3, so h = 0.5 already transmits with certainty.
    CHECK(table.labels[1] == "b");
    CHECK(table.betas[1] == 2.0);
    CHECK(table.rates[1][table.column_index("h0.5")] == 1.0);
    CHECK(table.rates[1][table.column_index("h10")] == doctest::Approx(1.0));

    auto edgeless_input = ws.write("lonely.txt", "a b\n");
    CHECK(invoke({"sir", "--input", edgeless_input, "--out-dir", ws.path().string()}).code ==
          cli::kThresholdUndefined);
}

TEST_CASE("sir output does not depend on the worker count") {
    Workspace ws("cli-workers");
    auto g = ws.write_graph("er.txt", erdos_renyi(40, 0.1, 3));
    CHECK(invoke({"sir", "--input", g, "--out-dir", ws.file("w1"), "--runs", "50", "--workers", "1"}).code ==
          cli::kOk);
    CHECK(invoke({"sir", "--input", g, "--out-dir", ws.file("w8"), "--runs", "50", "--workers", "8"}).code ==
          cli::kOk);
    CHECK(ws.read("w1/profile.csv") == ws.read("w8/profile.csv"));
}

TEST_CASE("analyze command") {
    Workspace ws("cli-analyze");
    const std::string dir = ws.path().string();

    SUBCASE("K4 gives a single cell") {
        auto k4 = ws.write_graph("k4.txt", complete(4));
        REQUIRE(invoke({"spectrum", "--input", k4, "--out-dir", dir}).code == cli::kOk);
        REQUIRE(invoke({"sir", "--input", k4, "--out-dir", dir, "--runs", "100"}).code == cli::kOk);
        auto r = invoke({"analyze", "--out-dir", dir, "--clusters-d", "3"});
        CHECK(r.code == cli::kOk);
        CHECK(r.err.find("reduced") != std::string::npos);
        auto analysis = nlohmann::json::parse(ws.read("analysis.json"));
        CHECK(analysis["icell_grid"]["rows"] == 1);
        CHECK(analysis["icell_grid"]["cols"] == 1);
        CHECK(analysis["dblocks"]["requested"] == 3);
        CHECK(r.out.find("C-blocks=1 D-blocks=1") != std::string::npos);
    }
    SUBCASE("triangle with pendant") {
        auto g = ws.write_graph("tp.txt", triangle_pendant());
        REQUIRE(invoke({"spectrum", "--input", g, "--out-dir", dir}).code == cli::kOk);
        REQUIRE(invoke({"sir", "--input", g, "--out-dir", dir, "--runs", "100"}).code == cli::kOk);
        auto r = invoke({"analyze", "--out-dir", dir, "--clusters-d", "2"});
        CHECK(r.code == cli::kOk);
        auto analysis = nlohmann::json::parse(ws.read("analysis.json"));
        CHECK(analysis["icell_grid"]["rows"] == 2);
        CHECK(analysis["icell_grid"]["cols"] == 2);
        // The pendant's spectrum row is the only one with core 1, so D-blocks coincide with C-blocks.
        std::size_t null_cells = 0;
        for (const auto& cell : analysis["icell_grid"]["cells"]) {
            null_cells += cell["mean"].is_null() ? 1 : 0;
        }
        CHECK(null_cells == 2);
        auto grid = ws.read("icell_grid.csv");
        CHECK(grid.rfind("cblock,core,d0,d1\n", 0) == 0);
        CHECK(grid.find(",,") != std::string::npos);
    }
    SUBCASE("node sets must agree") {
        auto p3 = ws.write_graph("p3.txt", path(3));
        REQUIRE(invoke({"spectrum", "--input", p3, "--out-dir", dir}).code == cli::kOk);
        ws.write("profile.csv", "node,beta,rate_h1.5\na,1,0.5\nb,1,0.7\nz,1,0.5\n");
        CHECK(invoke({"analyze", "--out-dir", dir, "--clusters-d", "2"}).code == cli::kNodeSetMismatch);
        ws.write("profile.csv", "node,beta,rate_h1.5\na,1,0.5\nb,1,0.7\n");
        CHECK(invoke({"analyze", "--out-dir", dir, "--clusters-d", "2"}).code == cli::kNodeSetMismatch);
        ws.write("profile.csv", "node,beta,rate_h1.5\na,1,0.5\nb,1,bad\nc,1,0.5\n");
        CHECK(invoke({"analyze", "--out-dir", dir, "--clusters-d", "2"}).code == cli::kParse);
        ws.write("profile.csv", "node,beta,rate_h1.5\na,1,0.5\nb,1,0.7\nc,1,0.5\n");
        CHECK(invoke({"analyze", "--out-dir", dir, "--clusters-d", "2"}).code == cli::kOk);
        CHECK(invoke({"analyze", "--out-dir", dir, "--clusters-d", "2", "--rate-column", "h9"}).code ==
              cli::kUsage);
    }
}

TEST_CASE("verify command") {
    Workspace ws("cli-verify");
    const std::string dir = ws.path().string();
    auto g = ws.write_graph("er.txt", erdos_renyi(30, 0.15, 4));
    REQUIRE(invoke({"spectrum", "--input", g, "--out-dir", dir}).code == cli::kOk);
    auto ok = invoke({"verify", "--input", g, "--out-dir", dir});
    CHECK(ok.code == cli::kOk);
    CHECK(ok.out.find("INVALID") == std::string::npos);
    CHECK(ok.out.find("C_0: valid") != std::string::npos);

    auto p3 = ws.write_graph("p3.txt", path(3));
    ws.write("bad.csv", "node,C_0,C_-1,C_-2\na,1,1,1\nb,1,1,2\nc,1,1,1\n");
    auto bad = invoke({"verify", "--input", p3, "--spectrum", ws.file("bad.csv")});
    CHECK(bad.code == cli::kVerifyFailed);
    CHECK(bad.out.find("C_-1: INVALID") != std::string::npos);

    ws.write("short.csv", "node,C_0,C_-1,C_-2\na,1,1,1\nb,1,2,2\n");
    CHECK(invoke({"verify", "--input", p3, "--spectrum", ws.file("short.csv")}).code == cli::kNodeSetMismatch);
}
