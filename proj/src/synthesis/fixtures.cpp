#include "ominv/synthesis/fixtures.hpp"

#include <sstream>

namespace ominv {

std::vector<Fixture> curated_fixtures() {
    MPoly x1 = MPoly::var("x1"), x2 = MPoly::var("x2"), x = MPoly::var("x"), v = MPoly::var("v1_0");
    RationalMatrix spiral{{-1, 1}, {-1, -1}}, osc{{0, 1}, {-1, 0}}, grow{{1}};
    RatVec e1{Rational(1), Rational(0)};
    std::vector<Fixture> out;
    out.push_back({"spiral-outside-disk", spiral, e1, Formula::ge(x1 * x1 + x2 * x2, MPoly(4)), Outcome::Exists,
                   Outcome::Exists, Formula::gt(MPoly(4) - v * v)});
    out.push_back({"oscillator-x1-ge-1", osc, e1, Formula::ge(x1, MPoly(1)), Outcome::NotExists, Outcome::NotExists,
                   Formula::gt(MPoly(1) - v * v)});
    out.push_back({"oscillator-x1-ge-2", osc, e1, Formula::ge(x1, MPoly(2)), Outcome::Exists, Outcome::Exists,
                   Formula::gt(MPoly(4) - v * v)});
    out.push_back({"growth-x-ge-5", grow, {Rational(1)}, Formula::ge(x, MPoly(5)), Outcome::NotExists,
                   Outcome::NotExists, Formula::gt(MPoly(5) - v)});
    out.push_back({"oscillator-x1-gt-1", osc, e1, Formula::gt(x1, MPoly(1)), Outcome::Unknown, Outcome::Exists,
                   Formula::ge(MPoly(1) - v * v)});
    return out;
}

std::string fixture_qe_table() {
    std::ostringstream os;
    for (auto &f : curated_fixtures()) {
        ConeSpec C = ConeSpec::build(f.A, f.x0);
        std::vector<std::string> vars = resolve_state_vars(f.target, C.dim(), {});
        Formula req = backend_request(C, f.target, vars);
        os << "# " << f.name << "\n"
           << sha256_hex(req.to_sexpr()) << " " << escape_line(f.backend_answer.to_sexpr()) << "\n";
    }
    return os.str();
}

} // namespace ominv
