// Copyright 2026 The segre-kit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "doctest.h"

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sys/wait.h>

#include "json.hpp"

namespace
{

struct Run {
    int code = -1;
    std::string out;
};

/// Runs the CLI with stdout captured and stderr folded in.
Run cli(const std::string &args)
{
    const std::string cmd = std::string("cd '") + SEGREKIT_CORPUS + "' && '" + SEGREKIT_CLI + "' " + args + " 2>&1";
    Run r;
    FILE *p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    std::array<char, 4096> buf{};
    while (std::size_t n = fread(buf.data(), 1, buf.size(), p)) {
        r.out.append(buf.data(), n);
    }
    const int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

bool contains(const std::string &hay, const std::string &needle)
{
    return hay.find(needle) != std::string::npos;
}

} // namespace

TEST_SUITE("cli")
{

TEST_CASE("analyze lewy.man")
{
    const Run r = cli("analyze lewy.man");
    CHECK(r.code == 0);
    CHECK(contains(r.out, "1-nondegenerate"));
    CHECK(contains(r.out, "FINITE_TYPE, rank chain 1 2"));
    CHECK(contains(r.out, "FINITE_TYPE at bracket depth 2"));
    CHECK(contains(r.out, "generic"));
}

TEST_CASE("analyze reports as JSON")
{
    const Run r = cli("analyze --json z4.man");
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["schema"] == "segre-kit-report/1");
    CHECK(j["finite_type"]["segre"]["verdict"] == "FINITE_TYPE");
    CHECK(j["finite_type"]["lie"]["depth"] == 4);
    CHECK(j["finite_type"]["agreement"] == true);
    CHECK(j["k_nondegeneracy"]["verdict"] == "INCONCLUSIVE");
    CHECK(j["holomorphic_nondegeneracy"]["verdict"] == "HOLOMORPHICALLY_NONDEGENERATE");
    CHECK_FALSE(j.contains("timing_ms"));

    const auto p = nlohmann::json::parse(cli("analyze --json plane.man").out);
    CHECK(p["finite_type"]["segre"]["verdict"] == "NOT_FINITE_TYPE_TO_ORDER");
    CHECK(p["levi"]["nondegenerate"] == false);
}

TEST_CASE("JSON output is byte-identical across runs and thread counts")
{
    const Run a = cli("analyze --json lewy.man hole.man codim2.man z4.man product.man");
    const Run b = cli("analyze --json -j 1 lewy.man hole.man codim2.man z4.man product.man");
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    const auto j = nlohmann::json::parse(a.out);
    REQUIRE(j.size() == 5);
    CHECK(j[0]["manifold"] == "lewy");
    CHECK(j[4]["manifold"] == "product");
}

TEST_CASE("raising the order keeps certified-positive verdicts")
{
    for (const char *name : {"lewy.man", "hole.man", "z4.man", "codim2.man"}) {
        INFO(std::string(name));
        for (int T : {8, 10, 12}) {
            const auto j = nlohmann::json::parse(cli("analyze --json --order " + std::to_string(T) + " " + name).out);
            CHECK(j["finite_type"]["segre"]["verdict"] == "FINITE_TYPE");
            CHECK(j["finite_type"]["lie"]["verdict"] == "FINITE_TYPE");
        }
    }
}

TEST_CASE("segre subcommand")
{
    const Run lewy = cli("segre lewy.man -j 3");
    CHECK(lewy.code == 0);
    CHECK(contains(lewy.out, "v3 = ((1+0*i)*t3 + O(9), (0-2*i)*t1*t2 + (0+2*i)*t2*t3 + O(9))"));
    CHECK(contains(cli("segre plane.man -j 2").out, "v2 = ((1+0*i)*t2 + O(9), 0 + O(9))"));
    const Run hole = cli("segre hole.man -j 2");
    CHECK(contains(hole.out, "Rk v2: rank 3 of 3x4 Jacobian (conclusive); witness minor"));
    const Run tilted = cli("segre lewy-tilted.man --gamma-vars 1");
    CHECK(contains(tilted.out, "solved for Z{1}"));
    CHECK(cli("segre lewy.man --gamma-vars 3").code == 2);
}

TEST_CASE("check-map subcommand")
{
    const Run self = cli("check-map hole-selfmap.map hole.man hole.man --classify");
    CHECK(self.code == 0);
    CHECK(contains(self.out, "PASS"));
    CHECK(contains(self.out, "CR transversal: no"));
    const Run bad = cli("check-map lewy-badmap.map lewy.man lewy.man");
    CHECK(contains(bad.out, "FAIL: component 1, term (-1+0*i)*zeta1 of degree 1"));
    const Run emb = cli("check-map embed2.map lewy.man embed-target2.man --classify");
    CHECK(contains(emb.out, "PASS"));
    CHECK(contains(emb.out, "CR transversal: yes"));
    const Run jets = cli("check-map lewy-heisenberg.map lewy.man lewy.man --jets-vs lewy-heisenberg.map --K 4");
    CHECK(contains(jets.out, "jets of order 4 agree with lewy-heisenberg: yes"));
    const auto j = nlohmann::json::parse(cli("check-map hole-selfmap-random.map hole.man hole.man --seed 7 --json").out);
    CHECK(j["seed"] == 7);
    CHECK(j["sends_into"]["verdict"] == "PASS");
}

TEST_CASE("jets subcommand")
{
    const Run r = cli("jets --source product.man --power-family 4 --K 2");
    CHECK(r.code == 0);
    CHECK(contains(r.out, "{identity, power3, power4}  distinct maps with equal jets"));
    CHECK(contains(r.out, "determination by 2-jets: FAILS"));
}

TEST_CASE("demo-lewy with builtin maps")
{
    const Run id = cli("demo-lewy");
    CHECK(id.code == 0);
    CHECK(contains(id.out, "R = (1+0*i)*t2   [checked]"));
    CHECK(contains(id.out, "v3 = ((1+0*i)*t3 + O(9), (0-2*i)*t1*t2 + (0+2*i)*t2*t3 + O(9))"));
    CHECK(contains(cli("demo-lewy --map dilation:2").out, "R = (2+0*i)*t2   [checked]"));
    CHECK(contains(cli("demo-lewy --map 'rotation:(3+4*i)/5'").out, "R = (3/5-4/5*i)*t2   [checked]"));
    CHECK(cli("demo-lewy --map lewy-heisenberg.map").code == 0);
    CHECK(cli("demo-lewy --map rotation:2").code == 2);
    CHECK(cli("demo-lewy --map hole-selfmap.map").code == 2);
}

TEST_CASE("errors and exit codes")
{
    const Run missing = cli("analyze does-not-exist.man");
    CHECK(missing.code == 2);
    const Run noarg = cli("");
    CHECK(noarg.code == 2);
    const auto dir = std::filesystem::temp_directory_path();
    const auto bad_index = dir / "segrekit-bad-index.man";
    std::ofstream(bad_index) << "N=2\nd=1\nrho:\nIm(Z2) - abs2(Z3)\n";
    const Run parse = cli("analyze '" + bad_index.string() + "'");
    CHECK(parse.code == 2);
    CHECK(contains(parse.out, "segrekit-bad-index.man:4:15: variable index out of range"));
    const auto off_point = dir / "segrekit-off-point.man";
    std::ofstream(off_point) << "N=2\nd=1\np=(1,0)\nrho:\nIm(Z2) - abs2(Z1)\n";
    const Run off = cli("analyze '" + off_point.string() + "' lewy.man");
    CHECK(off.code == 2);
    CHECK(contains(off.out, "base point is not on M"));
    CHECK(contains(off.out, "manifold lewy"));
    std::filesystem::remove(bad_index);
    std::filesystem::remove(off_point);
}

} // TEST_SUITE
