#pragma once

#include "ominv/error.hpp"

namespace ominv {

template <class Enclose>
RealAlgebraic pick_root(const std::vector<QPoly> &candidates, Enclose &&enclose) {
    std::vector<RealAlgebraic> roots;
    for (const auto &q : candidates)
        for (auto &r : isolate_real_roots(q))
            roots.push_back(r);
    Rational w(1);
    for (int iter = 0; iter < 4000; ++iter) {
        auto [lo, hi] = enclose(w);
        std::vector<RealAlgebraic> keep;
        for (auto &r : roots) {
            r.refine_to(w);
            auto [a, b] = r.isolator();
            if (!(b < lo || hi < a))
                keep.push_back(r);
        }
        if (keep.empty())
            fail(ErrorCode::Internal, "pick_root: enclosure misses every candidate root");
        roots = std::move(keep);
        if (roots.size() == 1)
            return roots[0];
        w /= 4;
    }
    fail(ErrorCode::PrecisionUnreachable, "pick_root: candidates not separated");
}

} // namespace ominv
