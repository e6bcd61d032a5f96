#include "ominv/semialg/boxqe.hpp"
#include "ominv/error.hpp"

#include <optional>

namespace ominv {

const char *verdict_name(Verdict v) {
    switch (v) {
    case Verdict::True:
        return "true";
    case Verdict::False:
        return "false";
    case Verdict::Unknown:
        return "unknown";
    }
    return "?";
}

const char *reason_name(UnknownReason r) {
    switch (r) {
    case UnknownReason::None:
        return "none";
    case UnknownReason::DepthExhausted:
        return "depth-exhausted";
    case UnknownReason::BackendMissing:
        return "backend-missing";
    case UnknownReason::TangentialSuspected:
        return "tangential-suspected";
    }
    return "?";
}

namespace {

struct CNode {
    FKind kind = FKind::True;
    CompiledPoly p;
    Rel rel = Rel::Eq;
    std::vector<CNode> ch;
};

CNode compile(const Formula &phi, const std::vector<std::string> &order) {
    CNode n;
    n.kind = phi.kind();
    switch (phi.kind()) {
    case FKind::Atom:
        n.p = CompiledPoly(phi.poly(), order);
        n.rel = phi.rel();
        break;
    case FKind::And:
    case FKind::Or:
    case FKind::Not:
        for (auto &c : phi.children())
            n.ch.push_back(compile(c, order));
        break;
    case FKind::Forall:
    case FKind::Exists:
        fail(ErrorCode::InvalidInput, "box decision needs a quantifier-free formula");
    default:
        break;
    }
    return n;
}

int atom_kleene(const Interval &v, Rel r) {
    switch (r) {
    case Rel::Gt:
        return v.positive() ? 1 : v.nonpositive() ? 0 : 2;
    case Rel::Ge:
        return v.nonnegative() ? 1 : v.negative() ? 0 : 2;
    case Rel::Eq:
        return v.is_point_zero() ? 1 : !v.contains_zero() ? 0 : 2;
    }
    return 2;
}

int kleene(const CNode &n, const std::vector<Interval> &box) {
    switch (n.kind) {
    case FKind::True:
        return 1;
    case FKind::False:
        return 0;
    case FKind::Atom:
        return atom_kleene(n.p.eval(box), n.rel);
    case FKind::And: {
        int r = 1;
        for (auto &c : n.ch) {
            int v = kleene(c, box);
            if (v == 0)
                return 0;
            if (v == 2)
                r = 2;
        }
        return r;
    }
    case FKind::Or: {
        int r = 0;
        for (auto &c : n.ch) {
            int v = kleene(c, box);
            if (v == 1)
                return 1;
            if (v == 2)
                r = 2;
        }
        return r;
    }
    case FKind::Not: {
        int v = kleene(n.ch[0], box);
        return v == 2 ? 2 : 1 - v;
    }
    default:
        return 2;
    }
}

bool exact(const CNode &n, const std::vector<Rational> &x) {
    switch (n.kind) {
    case FKind::True:
        return true;
    case FKind::False:
        return false;
    case FKind::Atom: {
        int s = sign(n.p.eval(x));
        return n.rel == Rel::Gt ? s > 0 : n.rel == Rel::Ge ? s >= 0 : s == 0;
    }
    case FKind::And:
        for (auto &c : n.ch)
            if (!exact(c, x))
                return false;
        return true;
    case FKind::Or:
        for (auto &c : n.ch)
            if (exact(c, x))
                return true;
        return false;
    case FKind::Not:
        return !exact(n.ch[0], x);
    default:
        return false;
    }
}

using RBox = std::vector<std::pair<Rational, Rational>>;

std::vector<Interval> to_intervals(const RBox &b) {
    std::vector<Interval> v;
    v.reserve(b.size());
    for (auto &[lo, hi] : b)
        v.emplace_back(lo, hi);
    return v;
}

std::vector<std::vector<Rational>> candidates(const RBox &b) {
    std::vector<std::vector<Rational>> out;
    size_t n = b.size();
    std::vector<Rational> mid(n);
    for (size_t i = 0; i < n; ++i)
        mid[i] = (b[i].first + b[i].second) / 2;
    out.push_back(mid);
    if (n <= 8) {
        for (size_t mask = 0; mask < (size_t(1) << n); ++mask) {
            std::vector<Rational> c(n);
            for (size_t i = 0; i < n; ++i)
                c[i] = (mask >> i & 1) ? b[i].second : b[i].first;
            out.push_back(std::move(c));
        }
    } else {
        std::vector<Rational> lo(n), hi(n);
        for (size_t i = 0; i < n; ++i) {
            lo[i] = b[i].first;
            hi[i] = b[i].second;
        }
        out.push_back(lo);
        out.push_back(hi);
    }
    return out;
}

bool lex_less(const std::vector<Rational> &a, const std::vector<Rational> &b) {
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] < b[i])
            return true;
        if (b[i] < a[i])
            return false;
    }
    return false;
}

struct Leaf {
    int value = 2;
    std::optional<std::vector<Rational>> witness;
};

Leaf examine(const CNode &root, const RBox &b, mpfr_prec_t prec) {
    PrecisionGuard g(prec);
    Leaf leaf;
    leaf.value = kleene(root, to_intervals(b));
    if (leaf.value == 1)
        return leaf;
    for (auto &c : candidates(b))
        if (!exact(root, c) && (!leaf.witness || lex_less(c, *leaf.witness)))
            leaf.witness = c;
    return leaf;
}

} // namespace

int eval_on_box(const Formula &phi, const std::vector<std::string> &order, const std::vector<Interval> &box) {
    return kleene(compile(phi, order), box);
}

ThreeValued decide_forall_box(const Formula &phi, const Box &bounds, const BoxOptions &opt) {
    std::vector<std::string> order;
    RBox root;
    for (auto &[v, b] : bounds) {
        order.push_back(v);
        root.push_back(b);
    }
    for (auto &v : phi.free_vars())
        if (!bounds.count(v))
            fail(ErrorCode::UnboundVariable, v);
    CNode cn = compile(phi, order);

    std::vector<RBox> level{root};
    ThreeValued out;
    for (unsigned depth = 0;; ++depth) {
        std::vector<Leaf> leaves(level.size());
        long n = static_cast<long>(level.size());
#pragma omp parallel for schedule(dynamic) if (opt.parallel && n > 1)
        for (long i = 0; i < n; ++i)
            leaves[i] = examine(cn, level[i], opt.precision);
        out.boxes += level.size();
        out.depth = depth;

        std::optional<std::vector<Rational>> best;
        for (auto &l : leaves)
            if (l.witness && (!best || lex_less(*l.witness, *best)))
                best = l.witness;
        if (best) {
            out.verdict = Verdict::False;
            for (size_t i = 0; i < order.size(); ++i)
                out.witness[order[i]] = (*best)[i];
            return out;
        }

        std::vector<RBox> next;
        for (size_t i = 0; i < level.size(); ++i) {
            if (leaves[i].value == 1)
                continue;
            if (depth == opt.depth_cap || order.empty()) {
                out.verdict = Verdict::Unknown;
                out.reason = UnknownReason::DepthExhausted;
                return out;
            }
            const RBox &b = level[i];
            size_t w = 0;
            for (size_t j = 1; j < b.size(); ++j)
                if (b[j].second - b[j].first > b[w].second - b[w].first)
                    w = j;
            Rational m = (b[w].first + b[w].second) / 2;
            RBox left = b, right = b;
            left[w].second = m;
            right[w].first = m;
            next.push_back(std::move(left));
            next.push_back(std::move(right));
        }
        if (next.empty()) {
            out.verdict = Verdict::True;
            return out;
        }
        if (next.size() > opt.max_boxes_per_level) {
            out.verdict = Verdict::Unknown;
            out.reason = UnknownReason::DepthExhausted;
            return out;
        }
        level = std::move(next);
    }
}

} // namespace ominv
