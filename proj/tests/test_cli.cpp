#include "doctest.h"

#include "ominv/cli/cli.hpp"
#include "ominv/error.hpp"
#include "ominv/semialg/qe.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

using namespace ominv;
using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string data(const std::string &name) { return std::string(OMINV_DATA_DIR) + "/" + name; }

ProblemFile load(const std::string &name) { return ProblemFile::parse(read_file(data(name))); }

CliOptions builtin() {
    CliOptions o;
    o.mode = "builtin";
    return o;
}

fs::path scratch() {
    fs::path d = fs::temp_directory_path() / "ominv_test_cli";
    fs::create_directories(d);
    return d;
}

struct Run {
    int code;
    std::string out, err;
};

Run run(const std::string &args) {
    fs::path d = scratch();
    std::string o = (d / "stdout.txt").string(), e = (d / "stderr.txt").string();
    std::string cmd = std::string(OMINV_BIN) + " " + args + " >" + o + " 2>" + e;
    int st = std::system(cmd.c_str());
    return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, read_file(o), read_file(e)};
}

ErrorCode code_of(const std::string &text) {
    try {
        ProblemFile::parse(text);
    } catch (const Error &e) {
        return e.code();
    }
    return ErrorCode::Internal;
}

} // namespace

TEST_CASE("problem file parsing and validation") {
    ProblemFile p = load("spiral.json");
    CHECK(p.A.rows() == 2);
    CHECK(p.x0.size() == 2);
    ProblemFile q = ProblemFile::from_json(p.to_json());
    CHECK(q.to_json() == p.to_json());
    ProblemFile m = ProblemFile::parse(R"J({"system": {"matrix": {"rows": 2, "cols": 2,
        "entries": [["-1", "1"], ["-1", "-1"]]}, "x0": ["1", "0"]},
        "target": "(atom (poly (1 (x1 2)) (1 (x2 2)) (-4)) ge)"})J");
    CHECK(m.A == p.A);
    CHECK(code_of(R"J({"system": {"matrix": {"rows": 2, "cols": 2, "entries": [["1", "0"]]}, "x0": [1, 0]},
        "target": "(atom (poly (1 (x1 1))) ge)"})J") == ErrorCode::ShapeMismatch);

    try {
        ProblemFile::parse(read_file(data("malformed.json")));
        FAIL("malformed input parsed");
    } catch (const Error &e) {
        CHECK(e.code() == ErrorCode::ParseError);
        CHECK(std::string(e.what()).find("line") != std::string::npos);
        CHECK(std::string(e.what()).find("column") != std::string::npos);
    }
    CHECK(code_of(R"J({"system": {"matrix": [[1, 0]], "x0": [1]}, "target": "(atom (poly (1 (x1 1))) ge)"})J") ==
          ErrorCode::NotSquare);
    CHECK(code_of(R"J({"system": {"matrix": [[1]], "x0": [1, 2]}, "target": "(atom (poly (1 (x1 1))) ge)"})J") ==
          ErrorCode::ShapeMismatch);
    CHECK(code_of(R"J({"system": {"matrix": [[1]], "x0": [1]}, "target": "(atom (poly (1 (y 1))) ge)",
                      "state_vars": ["x"]})J") == ErrorCode::UnboundVariable);
    CHECK(code_of(R"J({"system": {"matrix": [[1]], "x0": ["1/0"]}, "target": "(atom (poly (1 (x 1))) ge)"})J") !=
          ErrorCode::Internal);
    CHECK(code_of(R"J({"system": {"matrix": [[1]]}, "target": "(atom (poly (1 (x 1))) ge)"})J") ==
          ErrorCode::ParseError);
    CHECK(exit_code_for(ErrorCode::ParseError) == 3);
    CHECK(exit_code_for(ErrorCode::DegreeCapExceeded) == 4);
    CHECK(exit_code_for(ErrorCode::BackendUnavailable) == 5);
    CHECK(exit_code_for(ErrorCode::Internal) == 6);
}

TEST_CASE("analyze reports spectra and relations") {
    CommandResult r = cmd_analyze(load("osc_ge1.json"), {});
    CHECK(r.exit_code == 0);
    CHECK(r.output["dimension"] == 2);
    CHECK(r.output["omega_relations"]["generators"] == json::parse(R"J([["1", "1"]])J"));
    CHECK(r.output["jordan_exact"] == true);
    CHECK(r.text.find("torus dimension 1") != std::string::npos);

    CommandResult g = cmd_analyze(load("growth.json"), {});
    CHECK(g.output["blocks"].size() == 1);
    CHECK(g.output["omega"].size() == 1);
    CHECK(g.text.find("torus empty") != std::string::npos);
}

TEST_CASE("decide outcomes and exit codes") {
    struct F {
        const char *file;
        int code;
        const char *outcome;
    } fixtures[] = {{"spiral.json", 0, "Exists"},
                    {"osc_ge1.json", 1, "NotExists"},
                    {"osc_ge2.json", 0, "Exists"},
                    {"growth.json", 1, "NotExists"},
                    {"osc_gt1.json", 2, "Unknown"}};
    for (auto &f : fixtures) {
        CAPTURE(f.file);
        CommandResult r = cmd_decide(load(f.file), builtin());
        CHECK(r.exit_code == f.code);
        CHECK(r.outcome == f.outcome);
    }
    CommandResult s = cmd_decide(load("spiral.json"), builtin());
    CHECK(s.text.rfind("Exists t0=0", 0) == 0);
    CommandResult u = cmd_decide(load("osc_gt1.json"), builtin());
    CHECK(u.text.find("tangential") != std::string::npos);
}

TEST_CASE("synthesize and check round trip") {
    CommandResult d = cmd_decide(load("spiral.json"), builtin());
    CommandResult s = cmd_synthesize(d.output, builtin());
    REQUIRE(s.exit_code == 0);
    CHECK(s.output.contains("t_enter"));

    CommandResult direct = cmd_synthesize(load("spiral.json").to_json(), builtin());
    CHECK(direct.output == s.output);

    CommandResult c = cmd_check(s.output, load("spiral.json"), {});
    CHECK(c.exit_code == 0);
    CHECK(c.outcome == "pass");

    // re-parse the emitted text and validate again
    CommandResult c2 = cmd_check(json::parse(s.output.dump(2)), std::nullopt, {});
    CHECK(c2.exit_code == 0);
    CHECK(c2.output == c.output);

    CommandResult n = cmd_synthesize(cmd_decide(load("osc_ge1.json"), builtin()).output, builtin());
    CHECK(n.exit_code == 1);

    CHECK_THROWS_AS(cmd_check(cmd_decide(load("osc_ge1.json"), builtin()).output, std::nullopt, {}), Error);

    // a certificate checked against a different problem does not pass
    CommandResult other = cmd_check(s.output, load("osc_ge2.json"), {});
    CHECK(other.exit_code != 0);
}

TEST_CASE("reduce and simulate") {
    CliOptions o;
    o.samples = 64;
    CommandResult r = cmd_reduce(ExponentialPolynomial::parse(read_file(data("exp_positive.json"))), o);
    CHECK(r.exit_code == 0);
    CHECK(r.outcome == "NoZero");
    CHECK(r.output["tubes"]["found"] == true);
    ProblemFile inst = ProblemFile::from_json(r.output["instance"]);
    CHECK(inst.A.rows() == 5);

    CommandResult z = cmd_reduce(ExponentialPolynomial::parse(read_file(data("exp_zero.json"))), o);
    CHECK(z.exit_code == 1);
    CHECK(z.outcome == "ZeroFound");
    CHECK_FALSE(z.output.contains("tubes"));

    CommandResult sim = cmd_simulate(load("osc_ge1.json"), Rational(0), Rational(10), Rational(1, 10), 64);
    CHECK(sim.output["rows"].size() == 101);
    std::istringstream lines(sim.text);
    std::string line;
    size_t count = 0;
    while (std::getline(lines, line))
        ++count;
    CHECK(count == 102);
    CHECK(sim.output["rows"][100]["t"] == "10");
    CHECK_THROWS_AS(cmd_simulate(load("osc_ge1.json"), Rational(0), Rational(1), Rational(0), 64), Error);
}

TEST_CASE("binary exit codes, output files and run records") {
    fs::path d = scratch();
    std::string cert = (d / "spiral.cert.json").string(), log = (d / "run.log").string();
    fs::remove(log);

    CHECK(run("decide " + data("spiral.json") + " --mode builtin").code == 0);
    CHECK(run("decide " + data("osc_ge1.json") + " --mode builtin").code == 1);
    CHECK(run("decide " + data("osc_gt1.json") + " --mode builtin").code == 2);
    Run bad = run("decide " + data("malformed.json"));
    CHECK(bad.code == 3);
    CHECK(bad.err.find("line") != std::string::npos);
    CHECK(run("decide /nonexistent/problem.json").code > 2);
    CHECK(run("frobnicate").code > 2);

    Run s1 = run("synthesize " + data("spiral.json") + " --mode builtin -o " + cert + " --log " + log);
    REQUIRE(s1.code == 0);
    CHECK_FALSE(fs::exists(cert + ".tmp"));
    std::string first = read_file(cert);
    CHECK(s1.err.find("t_enter") == std::string::npos);
    CHECK(s1.err.find("cone") == std::string::npos);

    Run s2 = run("synthesize " + data("spiral.json") + " --mode builtin -o " + cert + " --log " + log);
    REQUIRE(s2.code == 0);
    CHECK(read_file(cert) == first);

    Run c = run("check " + cert + " --problem " + data("spiral.json"));
    CHECK(c.code == 0);
    CHECK(c.out.find("overall pass") != std::string::npos);

    std::istringstream ls(read_file(log));
    std::vector<json> recs;
    std::string line;
    while (std::getline(ls, line))
        recs.push_back(json::parse(line));
    REQUIRE(recs.size() == 2);
    CHECK(recs[0]["output_sha256"] == sha256_hex(first));
    CHECK(recs[0]["output_sha256"] == recs[1]["output_sha256"]);
    CHECK(recs[0]["input_sha256"] == recs[1]["input_sha256"]);
    CHECK(recs[0]["command"] == "synthesize");
    CHECK(recs[0]["version"] == tool_version());

    Run sim = run("simulate " + data("osc_ge1.json") + " --from 0 --to 10 --step 1/10");
    CHECK(sim.code == 0);
    size_t rows = 0;
    for (char ch : sim.out)
        rows += ch == '\n';
    CHECK(rows == 102);
}
