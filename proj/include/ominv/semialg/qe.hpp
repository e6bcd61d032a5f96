#pragma once

#include "ominv/semialg/boxqe.hpp"
#include "ominv/semialg/formula.hpp"

#include <cstdint>
#include <memory>
#include <string>

namespace ominv {

std::string sha256_hex(const std::string &data);

// One request per line: backslash and newline are escaped as \\ and \n.
std::string escape_line(const std::string &s);
std::string unescape_line(const std::string &s);

class QeBackend {
  public:
    virtual ~QeBackend() = default;
    // Response text, or "unsupported".
    virtual std::string query(const std::string &request) = 0;
    virtual std::string describe() const = 0;
};

// Runs `sh -c command` per request, feeding the escaped request on stdin and
// reading one escaped response line from stdout.
class SubprocessBackend : public QeBackend {
  public:
    explicit SubprocessBackend(std::string command) : cmd_(std::move(command)) {}
    std::string query(const std::string &request) override;
    std::string describe() const override { return cmd_; }

  private:
    std::string cmd_;
};

// Output of `sh -c command` given `input` on stdin; throws BackendUnavailable
// if the command cannot run.
std::string run_subprocess(const std::string &command, const std::string &input);

struct QeOptions {
    size_t samples = 100;
    uint64_t seed = 1;
    // sample free variables uniformly from [-span, span] with dyadic steps
    long span = 4;
    unsigned denominator_bits = 3;
    BoxOptions box{10, size_t(1) << 14, 128, true};
};

struct QeResult {
    Formula formula;
    size_t samples = 0;
    // samples where the quantified input could be decided and compared
    size_t decided = 0;
};

// Truth of a closed formula whose quantifiers form a single bounded block
// over a quantifier-free body.
ThreeValued decide_closed(const Formula &phi, const BoxOptions &opt);

// Quantified formula to an equivalent quantifier-free one. Quantifier-free
// input is returned unchanged without consulting the backend.
QeResult external_qe(const Formula &phi, QeBackend *backend, const QeOptions &opt = {});

} // namespace ominv
