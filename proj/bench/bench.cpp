// Serial versus OpenMP kernels, plus exact spectral and enclosure costs.

#include "ominv/checker/checker.hpp"
#include "ominv/semialg/boxqe.hpp"
#include "ominv/spectral/jordan.hpp"
#include "ominv/synthesis/decide.hpp"

#include <benchmark/benchmark.h>

using namespace ominv;

namespace {

MPoly X(const char *v) { return MPoly::var(v); }

// true on the whole box, tight near the origin
Formula positive_form() {
    MPoly q = X("x") * X("x") + X("y") * X("y") - X("x") * X("y") + MPoly(Rational(1, 1000));
    return Formula::gt(q, MPoly(0));
}

void BM_box_forall(benchmark::State &st) {
    BoxOptions o;
    o.parallel = st.range(0) != 0;
    o.depth_cap = 12;
    Box b{{"x", {Rational(-1), Rational(1)}}, {"y", {Rational(-1), Rational(1)}}};
    Formula phi = positive_form();
    for (auto _ : st)
        benchmark::DoNotOptimize(decide_forall_box(phi, b, o).verdict);
}
BENCHMARK(BM_box_forall)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

struct Spiral {
    RationalMatrix A{{-1, 1}, {-1, -1}};
    RatVec x0{Rational(1), Rational(0)};
    Formula Y = Formula::ge(X("x1") * X("x1") + X("x2") * X("x2"), MPoly(4));
};

void BM_decide_tail(benchmark::State &st) {
    Spiral s;
    DecideConfig c;
    c.mode = DecideMode::Builtin;
    c.tail.parallel = st.range(0) != 0;
    for (auto _ : st)
        benchmark::DoNotOptimize(decide_eventual(s.A, s.x0, s.Y, c).verdict);
}
BENCHMARK(BM_decide_tail)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

void BM_validate(benchmark::State &st) {
    Spiral s;
    DecideConfig c;
    c.mode = DecideMode::Builtin;
    DecisionOutcome d = decide_eventual(s.A, s.x0, s.Y, c);
    ValidateOptions o;
    o.parallel = st.range(0) != 0;
    o.invariance_samples = 200;
    for (auto _ : st)
        benchmark::DoNotOptimize(validate_certificate(*d.certificate, s.A, s.x0, s.Y, o).overall());
}
BENCHMARK(BM_validate)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

void BM_jordan(benchmark::State &st) {
    RationalMatrix A{{0, 1, 1, 0}, {-1, 0, 0, 1}, {0, 0, 0, 1}, {0, 0, -1, 0}};
    for (auto _ : st)
        benchmark::DoNotOptimize(jordan_decompose(A).jordan.blocks.size());
}
BENCHMARK(BM_jordan)->Unit(benchmark::kMillisecond);

void BM_orbit_enclosure(benchmark::State &st) {
    Spiral s;
    unsigned bits = static_cast<unsigned>(st.range(0));
    for (auto _ : st)
        benchmark::DoNotOptimize(orbit_enclosure(s.A, s.x0, Rational(7, 2), bits).size());
}
BENCHMARK(BM_orbit_enclosure)->Arg(64)->Arg(256)->ArgName("bits")->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
