#include "commands.hpp"
#include "problem.hpp"

#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace hpt;
using namespace hpt::cli;

namespace {

namespace fs = std::filesystem;

const fs::path problems = HPT_PROBLEMS_DIR;

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run hpt_run(std::vector<std::string> args)
{
    args.insert(args.begin(), "hpt");
    std::vector<const char*> argv;
    for (const auto& a : args)
        argv.push_back(a.c_str());
    std::ostringstream out, err;
    int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path scratch(const std::string& name, const std::string& text)
{
    fs::path dir = fs::temp_directory_path() / "hpt_cli_test";
    fs::create_directories(dir);
    fs::path p = dir / name;
    std::ofstream(p) << text;
    return p;
}

std::string file(const std::string& name)
{
    return (problems / name).string();
}

} // namespace

TEST_CASE("problem files round trip")
{
    for (const char* name : {"abelian.json", "heisenberg.json", "acyclic_pair.json", "jacobi_violating.json",
                             "sh_homology.json"}) {
        CAPTURE(name);
        Problem p = parse_problem(slurp(problems / name));
        const std::string once = to_json(p).dump();
        const std::string twice = to_json(parse_problem(once)).dump();
        CHECK(once == twice);
    }
    Problem p = parse_problem(R"({"modules":[{"name":"g","basis":[{"label":"x","degree":0},{"label":"y","degree":0}]}],
        "structure":{"on":"g","lie":[["x","y","y","-6/4"]]}})");
    CHECK(std::get<3>(p.lie[0]) == Rational(-3, 2));
    CHECK(to_json(p)["structure"]["lie"][0][3] == "-3/2");
    CHECK(p.max_weight == 4);
}

TEST_CASE("abelian transfer has an empty D table")
{
    Run r = hpt_run({"transfer", file("abelian.json"), "--strict"});
    REQUIRE(r.code == 0);
    auto report = json::parse(r.out);
    CHECK(report["D"].empty());
    CHECK(report["ok"] == true);
}

TEST_CASE("oracle agrees on the canonical files")
{
    Run h = hpt_run({"oracle", file("heisenberg.json"), "--arity", "3"});
    CHECK(h.code == 0);
    CHECK(json::parse(h.out)["diffs"].empty());
    for (const char* n : {"2", "3", "4"}) {
        Run a = hpt_run({"oracle", file("acyclic_pair.json"), "--arity", n});
        CHECK(a.code == 0);
        CHECK(json::parse(a.out)["diffs"].empty());
    }
    Run t = hpt_run({"transfer", file("acyclic_pair.json"), "--strict"});
    bool ternary = false;
    const json d = json::parse(t.out)["D"];
    for (const auto& e : d)
        ternary = ternary || e["word"].size() == 3;
    CHECK(ternary);
}

TEST_CASE("validate")
{
    for (const char* name : {"abelian.json", "heisenberg.json", "acyclic_pair.json", "sh_homology.json"})
        CHECK(hpt_run({"validate", file(name)}).code == 0);

    Run j = hpt_run({"validate", file("jacobi_violating.json")});
    CHECK(j.code == 1);
    CHECK(j.err.find("Jacobi at (a, b, c)") != std::string::npos);

    auto dd = scratch("dd.json", R"({"modules":[{"name":"g","basis":[
        {"label":"a","degree":2},{"label":"b","degree":1},{"label":"c","degree":0}]}],
        "differentials":{"g":[["a","b","1"],["b","c","1"]]},"structure":{"on":"g","lie":[]}})");
    Run d = hpt_run({"validate", dd.string()});
    CHECK(d.code == 1);
    CHECK(json::parse(d.out)["checks"][0]["witness"] == "a");

    auto bad_h = scratch("bad_h.json", R"({"modules":[{"name":"g","basis":[{"label":"u","degree":1},{"label":"v","degree":2}]},
        {"name":"M","basis":[]}],"differentials":{"g":[["v","u","1"]]},
        "contraction":{"small":"M","big":"g","nabla":[],"pi":[],"h":[["u","v","2"]]},
        "structure":{"on":"g","lie":[]}})");
    CHECK(hpt_run({"validate", bad_h.string()}).code == 1);
    CHECK(hpt_run({"transfer", bad_h.string(), "--strict"}).code == 1);
}

TEST_CASE("input errors exit 2")
{
    auto broken = scratch("broken.json", "{\n  \"modules\": [\n    {\"name\": \"g\",, }\n]}");
    Run b = hpt_run({"validate", broken.string()});
    CHECK(b.code == 2);
    CHECK(b.err.find("line 3") != std::string::npos);

    auto schema = scratch("schema.json", R"({"modules":[{"name":"g","basis":[{"label":"x","degree":"1"}]}],
        "structure":{"on":"h","lie":[["x","x","x",1]]},"extra":1})");
    Run s = hpt_run({"validate", schema.string()});
    CHECK(s.code == 2);
    for (const char* part : {"unknown key 'extra'", "degree: expected an integer", "unknown module 'h'",
                             "coefficients are strings"})
        CHECK(s.err.find(part) != std::string::npos);

    auto label = scratch("label.json", R"({"modules":[{"name":"g","basis":[{"label":"x","degree":1}]}],
        "structure":{"on":"g","lie":[["x","w","x","1"]]}})");
    CHECK(hpt_run({"validate", label.string()}).code == 2);

    CHECK(hpt_run({"transfer", file("sh_homology.json"), "--strict"}).code == 2);
    CHECK(hpt_run({"transfer", file("heisenberg.json")}).code == 2);
    CHECK(hpt_run({"transfer", file("heisenberg.json"), "--strict", "--sh"}).code == 2);
    CHECK(hpt_run({"transfer", file("heisenberg.json"), "--strict", "--degree-window", "3"}).code == 2);
    CHECK(hpt_run({"transfer", file("heisenberg.json"), "--strict", "--degree-window", "2:2"}).code == 2);
    CHECK(hpt_run({"transfer", file("heisenberg.json"), "--strict", "--max-weight", "1"}).code == 2);
    CHECK(hpt_run({"oracle", file("heisenberg.json"), "--arity", "1"}).code == 2);
    CHECK(hpt_run({"validate", "/nonexistent/problem.json"}).code == 2);
    CHECK(hpt_run({"frobnicate"}).code == 2);
}

TEST_CASE("reports are deterministic and verifiable")
{
    for (const char* mode : {"--strict", "--sh"}) {
        CAPTURE(mode);
        Run a = hpt_run({"transfer", file("acyclic_pair.json"), mode, "--check-level", "full"});
        Run b = hpt_run({"transfer", file("acyclic_pair.json"), mode, "--check-level", "full"});
        REQUIRE(a.code == 0);
        CHECK(a.out == b.out);

        auto report = scratch("report.json", a.out);
        CHECK(hpt_run({"verify", report.string()}).code == 0);

        json tampered = json::parse(a.out);
        tampered["tau"][0][2] = "7";
        CHECK(hpt_run({"verify", scratch("tampered.json", tampered.dump()).string()}).code == 1);

        json d_tampered = json::parse(a.out);
        d_tampered["D"][0]["coef"] = "5";
        CHECK(hpt_run({"verify", scratch("d_tampered.json", d_tampered.dump()).string()}).code == 1);
    }
}

TEST_CASE("sh input along the identity reproduces its table")
{
    Run r = hpt_run({"transfer", file("sh_homology.json"), "--sh", "--check-level", "full"});
    REQUIRE(r.code == 0);
    auto report = json::parse(r.out);
    json given = parse_json(slurp(problems / "sh_homology.json"))["structure"]["sh"];
    std::vector<std::string> a, b;
    for (const auto& e : report["D"])
        a.push_back(e.dump());
    for (const auto& e : given)
        b.push_back(e.dump());
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    CHECK(a == b);
    CHECK(report["homology"]["source"] == report["homology"]["base"]);
}

TEST_CASE("strict full run includes theta and the transfer contraction")
{
    Run r = hpt_run({"transfer", file("heisenberg.json"), "--strict", "--check-level", "full", "--max-weight", "3"});
    REQUIRE(r.code == 0);
    auto report = json::parse(r.out);
    CHECK(report["problem"]["truncation"]["max_weight"] == 3);
    bool theta = false;
    for (const auto& c : report["checks"])
        theta = theta || c["name"] == "theta: master equation";
    CHECK(theta);

    auto disconnected = scratch("degree0.json", R"({"modules":[{"name":"g","basis":[
        {"label":"x","degree":0},{"label":"y","degree":1}]}],"structure":{"on":"g","lie":[]}})");
    Run d = hpt_run({"transfer", disconnected.string(), "--strict", "--check-level", "full", "--max-weight", "3"});
    CHECK(d.code == 0);
    CHECK(json::parse(d.out)["notes"].size() == 1);
}
