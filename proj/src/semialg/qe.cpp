#include "ominv/semialg/qe.hpp"
#include "ominv/error.hpp"

#include <openssl/sha.h>

#include <csignal>
#include <cstdio>
#include <random>
#include <sys/wait.h>
#include <unistd.h>

namespace ominv {

std::string sha256_hex(const std::string &data) {
    unsigned char md[SHA256_DIGEST_LENGTH];
    SHA256(reinterpret_cast<const unsigned char *>(data.data()), data.size(), md);
    static const char *hex = "0123456789abcdef";
    std::string out;
    for (unsigned char c : md) {
        out += hex[c >> 4];
        out += hex[c & 15];
    }
    return out;
}

std::string escape_line(const std::string &s) {
    std::string out;
    for (char c : s) {
        if (c == '\\')
            out += "\\\\";
        else if (c == '\n')
            out += "\\n";
        else
            out += c;
    }
    return out;
}

std::string unescape_line(const std::string &s) {
    std::string out;
    for (size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '\\' && i + 1 < s.size()) {
            out += s[i + 1] == 'n' ? '\n' : s[i + 1];
            ++i;
        } else {
            out += s[i];
        }
    }
    return out;
}

std::string run_subprocess(const std::string &command, const std::string &input) {
    int in[2], out[2];
    if (pipe(in) != 0 || pipe(out) != 0)
        fail(ErrorCode::BackendUnavailable, "pipe failed");
    pid_t pid = fork();
    if (pid < 0)
        fail(ErrorCode::BackendUnavailable, "fork failed");
    if (pid == 0) {
        dup2(in[0], 0);
        dup2(out[1], 1);
        close(in[0]);
        close(in[1]);
        close(out[0]);
        close(out[1]);
        execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char *>(nullptr));
        _exit(127);
    }
    close(in[0]);
    close(out[1]);
    auto old = std::signal(SIGPIPE, SIG_IGN);
    size_t off = 0;
    while (off < input.size()) {
        ssize_t w = write(in[1], input.data() + off, input.size() - off);
        if (w <= 0)
            break;
        off += static_cast<size_t>(w);
    }
    close(in[1]);
    std::string result;
    char buf[4096];
    ssize_t r;
    while ((r = read(out[0], buf, sizeof buf)) > 0)
        result.append(buf, static_cast<size_t>(r));
    close(out[0]);
    int status = 0;
    waitpid(pid, &status, 0);
    std::signal(SIGPIPE, old);
    if (!WIFEXITED(status) || WEXITSTATUS(status) != 0)
        fail(ErrorCode::BackendUnavailable, "backend '" + command + "' exited abnormally");
    return result;
}

std::string SubprocessBackend::query(const std::string &request) {
    std::string raw = run_subprocess(cmd_, escape_line(request) + "\n");
    auto nl = raw.find('\n');
    return unescape_line(nl == std::string::npos ? raw : raw.substr(0, nl));
}

namespace {

bool unpack_block(const Formula &phi, FKind kind, Box &box, Formula &body) {
    Formula cur = phi;
    bool any = false;
    while (cur.kind() == kind) {
        for (auto &b : cur.bound()) {
            if (!b.bounded())
                return false;
            box[b.name] = {*b.lo, *b.hi};
        }
        cur = cur.body();
        any = true;
    }
    body = cur;
    return any && cur.quantifier_free();
}

ThreeValued invert(ThreeValued t) {
    if (t.verdict == Verdict::True)
        t.verdict = Verdict::False;
    else if (t.verdict == Verdict::False)
        t.verdict = Verdict::True;
    return t;
}

} // namespace

ThreeValued decide_closed(const Formula &phi, const BoxOptions &opt) {
    if (phi.quantifier_free())
        return eval_formula(phi, std::map<std::string, Rational>{}) ? ThreeValued::yes() : ThreeValued::no();
    if (phi.kind() == FKind::Not)
        return invert(decide_closed(phi.body(), opt));
    Box box;
    Formula body;
    if (phi.kind() == FKind::Forall && unpack_block(phi, FKind::Forall, box, body))
        return decide_forall_box(body, box, opt);
    if (phi.kind() == FKind::Exists && unpack_block(phi, FKind::Exists, box, body))
        return invert(decide_forall_box(Formula::negate(body), box, opt));
    return ThreeValued::unknown(UnknownReason::DepthExhausted);
}

QeResult external_qe(const Formula &phi, QeBackend *backend, const QeOptions &opt) {
    QeResult res;
    if (phi.quantifier_free()) {
        res.formula = phi;
        return res;
    }
    if (!backend)
        fail(ErrorCode::BackendUnavailable, "no quantifier elimination backend configured");
    std::string reply = backend->query(phi.to_sexpr());
    if (reply == "unsupported")
        fail(ErrorCode::BackendUnavailable, "backend reported unsupported");
    Formula qf;
    try {
        qf = Formula::parse(reply);
    } catch (const Error &e) {
        fail(ErrorCode::BackendDisagreement, std::string("unparseable backend output: ") + e.what());
    }
    if (!qf.quantifier_free())
        fail(ErrorCode::BackendDisagreement, "backend output is not quantifier-free");
    auto fv = phi.free_vars();
    for (auto &v : qf.free_vars())
        if (!fv.count(v))
            fail(ErrorCode::BackendDisagreement, "backend output mentions unknown variable " + v);

    std::mt19937_64 rng(opt.seed);
    long den = 1L << opt.denominator_bits;
    std::uniform_int_distribution<long> num(-opt.span * den, opt.span * den);
    for (size_t k = 0; k < opt.samples; ++k) {
        std::map<std::string, Rational> pt;
        std::map<std::string, MPoly> subs;
        for (auto &v : fv) {
            Rational q(num(rng), den);
            q.canonicalize();
            pt[v] = q;
            subs[v] = MPoly(q);
        }
        ++res.samples;
        bool claimed = eval_formula(qf, pt);
        ThreeValued truth = decide_closed(substitute(phi, subs), opt.box);
        if (truth.verdict == Verdict::Unknown)
            continue;
        ++res.decided;
        if ((truth.verdict == Verdict::True) != claimed)
            fail(ErrorCode::BackendDisagreement, "backend output disagrees at sample " + std::to_string(k));
    }
    res.formula = qf;
    return res;
}

} // namespace ominv
