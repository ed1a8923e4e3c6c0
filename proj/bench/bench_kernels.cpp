#include <benchmark/benchmark.h>

#include "wingvol/cev.hpp"
#include "wingvol/heston_kou.hpp"
#include "wingvol/smile_kernel.hpp"

namespace {

using namespace wingvol;

const CevModel& cev_model() {
    static const CevModel model({100.0, 0.25, 0.5}, 1.0);
    return model;
}

const HestonKouPricer& hk_pricer() {
    static const HestonKouPricer pricer(
        [] {
            HestonKouParams p;
            p.spot = 100.0;
            p.volvol = 1.0;
            p.lambda = 1.0;
            p.eta1 = 30.0;
            p.eta2 = 30.0;
            return p;
        }(),
        1.0);
    return pricer;
}

void BM_CevSmileParallel(benchmark::State& state) {
    const auto grid = geometric_grid(20.0, 500.0, static_cast<std::size_t>(state.range(0)));
    const CevModel& m = cev_model();
    const PricingCurve call = m.call_curve(), put = m.put_curve();
    for (auto _ : state) benchmark::DoNotOptimize(evaluate_smile(m.setup(), call, put, grid));
}

void BM_CevSmileSerial(benchmark::State& state) {
    const auto grid = geometric_grid(20.0, 500.0, static_cast<std::size_t>(state.range(0)));
    const CevModel& m = cev_model();
    const PricingCurve call = m.call_curve(), put = m.put_curve();
    for (auto _ : state) benchmark::DoNotOptimize(evaluate_smile_serial(m.setup(), call, put, grid));
}

void BM_HestonKouSmileParallel(benchmark::State& state) {
    const auto grid = geometric_grid(20.0, 500.0, static_cast<std::size_t>(state.range(0)));
    const HestonKouPricer& p = hk_pricer();
    const PricingCurve call = p.call_curve(), put = p.put_curve();
    for (auto _ : state) benchmark::DoNotOptimize(evaluate_smile(p.setup(), call, put, grid));
}

void BM_HestonKouSmileSerial(benchmark::State& state) {
    const auto grid = geometric_grid(20.0, 500.0, static_cast<std::size_t>(state.range(0)));
    const HestonKouPricer& p = hk_pricer();
    const PricingCurve call = p.call_curve(), put = p.put_curve();
    for (auto _ : state) benchmark::DoNotOptimize(evaluate_smile_serial(p.setup(), call, put, grid));
}

}  // namespace

BENCHMARK(BM_CevSmileParallel)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CevSmileSerial)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_HestonKouSmileParallel)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_HestonKouSmileSerial)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
