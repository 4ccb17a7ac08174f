#include <qlambda/amplitudes.hpp>
#include <qlambda/lambda.hpp>
#include <qlambda/vacpol.hpp>

#include <benchmark/benchmark.h>

using namespace qlambda;

namespace {

const Constants kConstants = Constants::natural();

void BM_ComptonTotal(benchmark::State& state) {
    const ComptonKinematics kin = compton_kinematics(0.8, 1.1, Boost::along_x(0.3), kConstants.m_e);
    for (auto _ : state) benchmark::DoNotOptimize(compton_total(kin, ComptonLabels{}, kConstants));
}
BENCHMARK(BM_ComptonTotal);

void BM_MollerTotal(benchmark::State& state) {
    const MollerKinematics kin = moller_kinematics(3.0, 1.0, Boost(), kConstants.m_e);
    for (auto _ : state) benchmark::DoNotOptimize(moller_total(kin, MollerSpins{}, kConstants));
}
BENCHMARK(BM_MollerTotal);

void BM_EvolveLambda(benchmark::State& state) {
    const LevelSystem sys = LevelSystem::lambda(0.0, 1.0, 0.05, 0.05);
    CVec psi0 = CVec::Zero(3);
    psi0[0] = 1.0;
    const auto steps = static_cast<double>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(evolve(sys, psi0, steps * 0.1, 0.1));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EvolveLambda)->Arg(1000)->Arg(10000);

void BM_MagnusSecondOrder(benchmark::State& state) {
    const LevelSystem sys = LevelSystem::lambda(0.0, 3.0, 0.0, {0.1, 0.02}, {0.07, -0.01});
    for (auto _ : state) benchmark::DoNotOptimize(magnus_second_order(sys));
}
BENCHMARK(BM_MagnusSecondOrder);

void BM_TotalShift(benchmark::State& state) {
    ShiftOptions opt;
    opt.threads = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(total_shift(Vec3(0.0, 0.0, 0.5), 1e3, MomentumGrid{}, kConstants, opt));
    }
}
BENCHMARK(BM_TotalShift)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
