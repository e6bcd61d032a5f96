#pragma once

#include "ominv/reduction/reduction.hpp"
#include "ominv/synthesis/decide.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ominv {

// {"system": {"matrix": [[...]], "x0": [...]}, "target": "<sexpr>",
//  "state_vars": [...], "options": {"mode", "depth", "precision", "qe_backend"}}
struct ProblemFile {
    RationalMatrix A;
    RatVec x0;
    Formula target;
    std::vector<std::string> state_vars;
    nlohmann::json options = nlohmann::json::object();

    static ProblemFile parse(const std::string &text);
    static ProblemFile from_json(const nlohmann::json &j);
    nlohmann::json to_json() const;
};

// Flags override file options; the backend falls back to OMINV_QE_BACKEND.
struct CliOptions {
    std::optional<std::string> mode, qe_backend;
    std::optional<unsigned> depth, degree_cap;
    std::optional<long> precision_bits;
    uint64_t seed = 1;
    size_t samples = 1000;
};

struct CommandResult {
    int exit_code = 0;
    std::string outcome;
    // human-readable summary for stdout
    std::string text;
    // machine-readable result for the output file
    nlohmann::json output = nlohmann::json::object();
};

// 3 input errors, 4 caps and thresholds, 5 backend failures, 6 internal
int exit_code_for(ErrorCode c);

DecideConfig decide_config(const ProblemFile &p, const CliOptions &o, std::unique_ptr<QeBackend> &backend);

CommandResult cmd_analyze(const ProblemFile &p, const CliOptions &o);
CommandResult cmd_decide(const ProblemFile &p, const CliOptions &o);
// input: a problem file or the output of decide
CommandResult cmd_synthesize(const nlohmann::json &input, const CliOptions &o);
// input: a certificate or the output of decide/synthesize; optional problem to match against
CommandResult cmd_check(const nlohmann::json &input, const std::optional<ProblemFile> &p, const CliOptions &o);
CommandResult cmd_reduce(const ExponentialPolynomial &f, const CliOptions &o);
CommandResult cmd_simulate(const ProblemFile &p, const Rational &from, const Rational &to, const Rational &step,
                           unsigned bits);

// Write to path.tmp then rename over path.
void write_atomic(const std::string &path, const std::string &content);
std::string read_file(const std::string &path);

// One JSON line appended to a run log.
nlohmann::json run_record(const std::string &command, const std::string &input, const CommandResult &r,
                          const std::string &output_path, const std::string &output_text, double elapsed_ms);

const char *tool_version();

int run_cli(int argc, char **argv);

} // namespace ominv
