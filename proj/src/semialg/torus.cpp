#include "ominv/semialg/torus.hpp"

namespace ominv {

std::pair<std::string, std::string> torus_var_names(size_t l) {
    return {"c" + std::to_string(l + 1), "s" + std::to_string(l + 1)};
}

std::pair<MPoly, MPoly> torus_character(const IntVec &a,
                                        const std::vector<std::pair<std::string, std::string>> &names) {
    MPoly re(1), im(0);
    for (size_t l = 0; l < a.size(); ++l) {
        if (a[l] == 0)
            continue;
        MPoly c = MPoly::var(names[l].first), s = MPoly::var(names[l].second);
        if (a[l] < 0)
            s = -s;
        unsigned e = static_cast<unsigned>(Integer(abs(a[l])).get_ui());
        for (unsigned k = 0; k < e; ++k) {
            MPoly nr = re * c - im * s;
            MPoly ni = re * s + im * c;
            re = std::move(nr);
            im = std::move(ni);
        }
    }
    return {re, im};
}

Formula build_torus_formula(const RelationLattice &rel,
                            const std::vector<std::pair<std::string, std::string>> &names) {
    std::vector<Formula> xs;
    for (size_t l = 0; l < rel.k; ++l) {
        MPoly c = MPoly::var(names[l].first), s = MPoly::var(names[l].second);
        xs.push_back(Formula::eq(c * c + s * s, MPoly(1)));
    }
    for (auto &a : rel.generators) {
        auto [re, im] = torus_character(a, names);
        xs.push_back(Formula::eq(re, MPoly(1)));
        xs.push_back(Formula::eq(im));
    }
    return Formula::conj(std::move(xs));
}

Formula build_torus_formula(const RelationLattice &rel) {
    std::vector<std::pair<std::string, std::string>> names;
    for (size_t l = 0; l < rel.k; ++l)
        names.push_back(torus_var_names(l));
    return build_torus_formula(rel, names);
}

} // namespace ominv
