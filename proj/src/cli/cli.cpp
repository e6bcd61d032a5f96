#include "ominv/cli/cli.hpp"
#include "ominv/checker/checker.hpp"
#include "ominv/error.hpp"
#include "ominv/spectral/jordan.hpp"
#include "ominv/spectral/lattice.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace ominv {

using nlohmann::json;

const char *tool_version() { return "ominv 0.1.0"; }

int exit_code_for(ErrorCode c) {
    switch (c) {
    case ErrorCode::ParseError:
    case ErrorCode::ShapeMismatch:
    case ErrorCode::NotSquare:
    case ErrorCode::UnboundVariable:
    case ErrorCode::InvalidInput:
    case ErrorCode::NotOnTorus:
        return 3;
    case ErrorCode::DegreeCapExceeded:
    case ErrorCode::PrecisionUnreachable:
    case ErrorCode::BelowThreshold:
    case ErrorCode::SearchExhausted:
    case ErrorCode::NoCertificate:
        return 4;
    case ErrorCode::BackendUnavailable:
    case ErrorCode::BackendDisagreement:
        return 5;
    default:
        return 6;
    }
}

static json parse_json(const std::string &text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error &e) {
        fail(ErrorCode::ParseError, e.what());
    }
}

ProblemFile ProblemFile::from_json(const json &j) {
    ProblemFile p;
    try {
        require(j.is_object() && j.contains("system") && j.contains("target"), ErrorCode::ParseError,
                "problem needs system and target");
        p.A = matrix_from_json(j.at("system").at("matrix"));
        p.x0 = ratvec_from_json(j.at("system").at("x0"));
        p.target = Formula::parse(j.at("target").get<std::string>());
        if (j.contains("state_vars"))
            p.state_vars = j.at("state_vars").get<std::vector<std::string>>();
        if (j.contains("options"))
            p.options = j.at("options");
    } catch (const json::exception &e) {
        fail(ErrorCode::ParseError, e.what());
    }
    require(p.A.square(), ErrorCode::NotSquare, "system matrix must be square");
    require(p.x0.size() == p.A.rows(), ErrorCode::ShapeMismatch, "x0 dimension differs from the matrix");
    require(p.state_vars.empty() || p.state_vars.size() == p.A.rows(), ErrorCode::ShapeMismatch,
            "state variable count differs from the dimension");
    std::vector<std::string> vars = resolve_state_vars(p.target, p.A.rows(), p.state_vars);
    for (auto &v : p.target.free_vars())
        require(std::find(vars.begin(), vars.end(), v) != vars.end(), ErrorCode::UnboundVariable, v);
    return p;
}

ProblemFile ProblemFile::parse(const std::string &text) { return from_json(parse_json(text)); }

json ProblemFile::to_json() const {
    json j = {{"system", {{"matrix", matrix_to_json(A)}, {"x0", ratvec_to_json(x0)}}}, {"target", target.to_sexpr()}};
    if (!state_vars.empty())
        j["state_vars"] = state_vars;
    if (!options.empty())
        j["options"] = options;
    return j;
}

DecideConfig decide_config(const ProblemFile &p, const CliOptions &o, std::unique_ptr<QeBackend> &backend) {
    DecideConfig cfg;
    std::string mode = o.mode.value_or(p.options.value("mode", std::string("auto")));
    cfg.mode = parse_mode(mode);
    std::optional<std::string> cmd = o.qe_backend;
    if (!cmd && p.options.contains("qe_backend"))
        cmd = p.options.at("qe_backend").get<std::string>();
    if (!cmd)
        if (const char *env = std::getenv("OMINV_QE_BACKEND"); env && *env)
            cmd = std::string(env);
    if (cmd) {
        backend = std::make_unique<SubprocessBackend>(*cmd);
        cfg.backend = backend.get();
    }
    unsigned depth = o.depth.value_or(p.options.value("depth", cfg.tail.depth_cap));
    cfg.tail.depth_cap = depth;
    long prec = o.precision_bits.value_or(p.options.value("precision", static_cast<long>(cfg.tail.precision)));
    require(prec >= 32 && prec <= 1 << 16, ErrorCode::InvalidInput, "precision out of range");
    cfg.tail.precision = prec;
    cfg.qe.box.precision = prec;
    cfg.qe.seed = o.seed;
    cfg.state_vars = p.state_vars;
    return cfg;
}

static void apply_caps(const CliOptions &o) {
    if (o.degree_cap)
        set_degree_cap(*o.degree_cap);
}

CommandResult cmd_analyze(const ProblemFile &p, const CliOptions &o) {
    apply_caps(o);
    CommandResult r;
    auto D = jordan_decompose(p.A);
    auto chk = verify_jordan(p.A, D.jordan);
    std::ostringstream os;
    os << "dimension " << p.A.rows() << "\n";
    os << "char_poly " << char_poly(p.A).to_string() << "\n";
    json blocks = json::array();
    for (size_t b = 0; b < D.jordan.blocks.size(); ++b) {
        auto &B = D.jordan.blocks[b];
        std::string re = B.lambda.re.enclosure_string(20), im = B.lambda.im.enclosure_string(20);
        std::string factor = D.jordan.factors[B.factor].q.to_string();
        os << "block " << b << " size " << B.size << " factor " << factor << " re " << re << " im " << im << "\n";
        blocks.push_back({{"size", B.size},
                          {"factor", D.jordan.factors[B.factor].q.to_list_string()},
                          {"re", json::parse(B.lambda.re.to_json())},
                          {"im", json::parse(B.lambda.im.to_json())}});
    }
    auto &S = D.spectral;
    RelationLattice Lw = additive_relations(S.omega), Lr = additive_relations(S.rho);
    os << "rho";
    for (auto &x : S.rho)
        os << " " << x.to_string();
    os << "\nomega";
    for (auto &x : S.omega)
        os << " " << x.to_string();
    os << "\nomega_relations " << Lw.to_string() << "\n";
    os << "rho_relations " << Lr.to_string() << "\n";
    os << "torus " << (S.omega.empty() || std::all_of(S.omega.begin(), S.omega.end(),
                                                        [](const RealAlgebraic &w) { return alg_sign(w) == 0; })
                           ? "empty"
                           : "dimension " + std::to_string(S.omega.size() - Lw.rank()))
       << "\n";
    os << "jordan_check AP=PJ " << (chk.AP_eq_PJ ? "exact" : "failed") << " P*Pinv=I "
       << (chk.P_Pinv_identity ? "exact" : "failed") << "\n";
    json rho = json::array(), omega = json::array();
    for (auto &x : S.rho)
        rho.push_back(json::parse(x.to_json()));
    for (auto &x : S.omega)
        omega.push_back(json::parse(x.to_json()));
    r.output = {{"dimension", p.A.rows()},
                {"char_poly", char_poly(p.A).to_list_string()},
                {"blocks", blocks},
                {"rho", rho},
                {"omega", omega},
                {"omega_relations", lattice_to_json(Lw)},
                {"rho_relations", lattice_to_json(Lr)},
                {"jordan_exact", chk.AP_eq_PJ && chk.P_Pinv_identity}};
    r.text = os.str();
    r.outcome = "analyzed";
    r.exit_code = chk.AP_eq_PJ && chk.P_Pinv_identity ? 0 : 6;
    return r;
}

static int outcome_exit(Outcome v) { return v == Outcome::Exists ? 0 : v == Outcome::NotExists ? 1 : 2; }

CommandResult cmd_decide(const ProblemFile &p, const CliOptions &o) {
    apply_caps(o);
    std::unique_ptr<QeBackend> backend;
    DecideConfig cfg = decide_config(p, o, backend);
    DecisionOutcome d = decide_eventual(p.A, p.x0, p.target, cfg);
    CommandResult r;
    r.output = outcome_to_json(d);
    r.outcome = outcome_name(d.verdict);
    r.exit_code = outcome_exit(d.verdict);
    std::ostringstream os;
    os << r.outcome;
    if (d.verdict == Outcome::Exists)
        os << " t0=" << d.t0.get_str();
    if (d.verdict == Outcome::Unknown)
        os << " reason=" << reason_name(d.reason);
    if (d.witness)
        os << " witness=" << d.witness->kind;
    os << " mode=" << mode_name(d.mode_used) << "\n";
    r.text = os.str();
    return r;
}

CommandResult cmd_synthesize(const json &input, const CliOptions &o) {
    CommandResult r;
    json decision;
    if (input.contains("verdict")) {
        decision = input;
    } else {
        CommandResult d = cmd_decide(ProblemFile::from_json(input), o);
        decision = d.output;
    }
    std::string verdict = decision.value("verdict", std::string("Unknown"));
    r.outcome = verdict;
    if (verdict == "Exists" && decision.contains("certificate") && !decision["certificate"].is_null()) {
        r.output = decision["certificate"];
        r.exit_code = 0;
        r.text = "certificate t_enter=" + r.output.value("t_enter", std::string("?")) + "\n";
        return r;
    }
    r.output = decision;
    r.exit_code = verdict == "NotExists" ? 1 : 2;
    r.text = "no certificate: " + verdict + "\n";
    return r;
}

CommandResult cmd_check(const json &input, const std::optional<ProblemFile> &p, const CliOptions &o) {
    json cj = input;
    if (input.contains("verdict")) {
        require(input.contains("certificate") && !input["certificate"].is_null(), ErrorCode::InvalidInput,
                "decision output carries no certificate");
        cj = input["certificate"];
    }
    FatConeCertificate cert = certificate_from_json(cj);
    RationalMatrix A = p ? p->A : cert.A;
    RatVec x0 = p ? p->x0 : cert.x0;
    Formula Y = p ? p->target : cert.target;
    ValidateOptions vo;
    vo.seed = o.seed;
    vo.invariance_samples = o.samples;
    if (o.precision_bits)
        vo.precision = *o.precision_bits;
    ValidationReport rep = validate_certificate(cert, A, x0, Y, vo);
    CommandResult r;
    r.output = rep.to_json();
    r.text = rep.text();
    CheckVerdict v = rep.overall();
    r.outcome = check_verdict_name(v);
    r.exit_code = v == CheckVerdict::Pass ? 0 : v == CheckVerdict::Fail ? 1 : 2;
    return r;
}

CommandResult cmd_reduce(const ExponentialPolynomial &f, const CliOptions &o) {
    CommandResult r;
    ReductionInstance I = build_reduction(f, o.degree_cap.value_or(64));
    ZeroOptions zo;
    if (o.depth)
        zo.depth = *o.depth;
    if (o.precision_bits)
        zo.precision = *o.precision_bits;
    ZeroCertificate z = certify_zero_freeness(f, zo);
    r.output = {{"instance", I.problem_json()}, {"zero", z.to_json()}};
    std::ostringstream os;
    os << "dimension " << I.A.rows() << " companion " << I.companion_poly.to_string() << "\n";
    os << "zero " << zero_status_name(z.status) << " [" << to_string(z.lo) << ", " << to_string(z.hi) << "]\n";
    r.outcome = zero_status_name(z.status);
    if (z.status == ZeroStatus::ZeroFound) {
        r.exit_code = 1;
    } else if (z.status == ZeroStatus::Unknown) {
        r.exit_code = 2;
    } else {
        TubeSearchOptions to;
        if (o.precision_bits)
            to.precision = *o.precision_bits;
        TubeCertificate c = invariant_from_tubes(I, f, to);
        r.output["tubes"] = c.to_json();
        if (!c.found) {
            os << "tubes " << c.reason << "\n";
            r.exit_code = 2;
        } else {
            ValidationReport rep = validate_tube_certificate(I, c, std::min<size_t>(o.samples, 200), o.seed);
            r.output["validation"] = rep.to_json();
            os << "tubes n=" << c.n << " mu=" << to_string(c.mu) << " validation "
               << check_verdict_name(rep.overall()) << "\n";
            r.exit_code = rep.overall() == CheckVerdict::Pass ? 0 : rep.overall() == CheckVerdict::Fail ? 1 : 2;
        }
    }
    r.text = os.str();
    return r;
}

CommandResult cmd_simulate(const ProblemFile &p, const Rational &from, const Rational &to, const Rational &step,
                           unsigned bits) {
    require(step > 0, ErrorCode::InvalidInput, "step must be positive");
    require(from >= 0 && to >= from, ErrorCode::InvalidInput, "need 0 <= from <= to");
    std::vector<std::string> vars = resolve_state_vars(p.target, p.A.rows(), p.state_vars);
    CommandResult r;
    std::ostringstream os;
    os << "t";
    for (auto &v : vars)
        os << "\t" << v;
    os << "\n";
    json rows = json::array();
    Integer n = floor_rat((to - from) / step);
    for (Integer k = 0; k <= n; ++k) {
        Rational t = from + Rational(k) * step;
        IntervalVector x = orbit_enclosure(p.A, p.x0, t, bits);
        os << to_string(t);
        json row = {{"t", to_string(t)}};
        json enc = json::array();
        for (auto &e : x) {
            os << "\t" << e.to_string(17);
            enc.push_back({to_string(e.lo_rat()), to_string(e.hi_rat())});
        }
        os << "\n";
        row["x"] = enc;
        rows.push_back(row);
    }
    r.text = os.str();
    r.output = {{"vars", vars}, {"rows", rows}};
    r.outcome = std::to_string(rows.size()) + " rows";
    return r;
}

void write_atomic(const std::string &path, const std::string &content) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        require(f.good(), ErrorCode::InvalidInput, "cannot write " + tmp);
        f << content;
        require(f.good(), ErrorCode::InvalidInput, "write failed for " + tmp);
    }
    require(std::rename(tmp.c_str(), path.c_str()) == 0, ErrorCode::InvalidInput, "cannot rename onto " + path);
}

std::string read_file(const std::string &path) {
    std::ifstream f(path, std::ios::binary);
    require(f.good(), ErrorCode::InvalidInput, "cannot read " + path);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

json run_record(const std::string &command, const std::string &input, const CommandResult &r,
                const std::string &output_path, const std::string &output_text, double elapsed_ms) {
    return {{"command", command},
            {"input_sha256", sha256_hex(input)},
            {"outcome", r.outcome},
            {"exit_code", r.exit_code},
            {"output", output_path},
            {"output_sha256", sha256_hex(output_text)},
            {"elapsed_ms", elapsed_ms},
            {"version", tool_version()}};
}

int run_cli(int argc, char **argv) {
    CLI::App app{"o-minimal invariants for continuous linear dynamical systems"};
    app.set_version_flag("--version", tool_version());
    app.require_subcommand(1);
    app.fallthrough();
    CliOptions o;
    std::string mode, backend, out, log, problem_path;
    unsigned depth = 0, degree_cap = 0, bits = 64;
    long precision = 0;
    std::string from = "0", to = "10", step = "1/10";
    app.add_option("--mode", mode, "auto, builtin or backend");
    app.add_option("--depth", depth, "subdivision depth cap");
    app.add_option("--precision-bits", precision, "working precision in bits");
    app.add_option("--degree-cap", degree_cap, "algebraic degree cap");
    app.add_option("--qe-backend", backend, "quantifier elimination command");
    app.add_option("--seed", o.seed, "sampling seed");
    app.add_option("--samples", o.samples, "validation samples");
    app.add_option("-o,--out", out, "output file (written atomically)");
    app.add_option("--log", log, "append a run record to this file");

    std::string input;
    auto *an = app.add_subcommand("analyze", "spectral report");
    auto *de = app.add_subcommand("decide", "decide existence of an o-minimal invariant");
    auto *sy = app.add_subcommand("synthesize", "write a fat-cone certificate");
    auto *ch = app.add_subcommand("check", "validate a certificate");
    auto *re = app.add_subcommand("reduce", "reduce an exponential polynomial");
    auto *si = app.add_subcommand("simulate", "orbit enclosure table");
    for (auto *s : {an, de, sy, ch, re, si})
        s->add_option("input", input, "input file")->required();
    ch->add_option("--problem", problem_path, "problem file the certificate must match");
    si->add_option("--from", from, "start time");
    si->add_option("--to", to, "end time");
    si->add_option("--step", step, "time step");
    si->add_option("--bits", bits, "enclosure width in bits");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return 3;
    }
    if (!mode.empty())
        o.mode = mode;
    if (!backend.empty())
        o.qe_backend = backend;
    if (depth)
        o.depth = depth;
    if (degree_cap)
        o.degree_cap = degree_cap;
    if (precision)
        o.precision_bits = precision;

    std::string command = app.get_subcommands().front()->get_name();
    auto start = std::chrono::steady_clock::now();
    try {
        std::string text = read_file(input);
        CommandResult r;
        if (command == "analyze")
            r = cmd_analyze(ProblemFile::parse(text), o);
        else if (command == "decide")
            r = cmd_decide(ProblemFile::parse(text), o);
        else if (command == "synthesize")
            r = cmd_synthesize(parse_json(text), o);
        else if (command == "check")
            r = cmd_check(parse_json(text),
                          problem_path.empty() ? std::nullopt
                                               : std::optional<ProblemFile>(ProblemFile::parse(read_file(problem_path))),
                          o);
        else if (command == "reduce")
            r = cmd_reduce(ExponentialPolynomial::parse(text), o);
        else
            r = cmd_simulate(ProblemFile::parse(text), parse_rational(from), parse_rational(to), parse_rational(step),
                             bits);
        std::string payload = r.output.dump(2) + "\n";
        std::cout << r.text;
        if (!out.empty())
            write_atomic(out, payload);
        else if (command != "simulate" && command != "analyze")
            std::cout << payload;
        if (!log.empty()) {
            double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
            std::ofstream lf(log, std::ios::app);
            lf << run_record(command, text, r, out, payload, ms).dump() << "\n";
        }
        return r.exit_code;
    } catch (const Error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e.code());
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 6;
    }
}

} // namespace ominv
