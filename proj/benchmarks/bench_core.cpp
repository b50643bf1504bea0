#include <cmath>

#include <benchmark/benchmark.h>

#include "repeaterlab/bell_algebra.hpp"
#include "repeaterlab/bell_oracle.hpp"
#include "repeaterlab/chain_config.hpp"
#include "repeaterlab/probe_model.hpp"
#include "repeaterlab/repeater_sim.hpp"

using namespace rlab;

namespace {

probe::ProbeParams segment_params() {
    const double eta = std::sqrt(probe::fiber_transmission(10.0, 0.17));
    return probe::params_for_distinguishability(1.6468, 0.5, eta);
}

const bell::BellDiagonalState kLinkState = probe::postselected_state(segment_params());

void BM_SuccessProbability(benchmark::State& state) {
    const auto params = segment_params();
    for (auto _ : state)
        benchmark::DoNotOptimize(probe::success_probability(params));
}
BENCHMARK(BM_SuccessProbability);

void BM_PostselectedState(benchmark::State& state) {
    const auto params = segment_params();
    for (auto _ : state)
        benchmark::DoNotOptimize(probe::postselected_state(params));
}
BENCHMARK(BM_PostselectedState);

void BM_OptimizeWindow(benchmark::State& state) {
    const double eta = std::sqrt(probe::fiber_transmission(10.0, 0.17));
    for (auto _ : state)
        benchmark::DoNotOptimize(probe::optimize_distinguishability(0.5, eta));
}
BENCHMARK(BM_OptimizeWindow);

void BM_Purify(benchmark::State& state) {
    const bell::GateNoise noise{0.005};
    for (auto _ : state)
        benchmark::DoNotOptimize(bell::purify(kLinkState, kLinkState, noise));
}
BENCHMARK(BM_Purify);

void BM_SwapKeepTarget(benchmark::State& state) {
    const bell::GateNoise noise{0.005};
    for (auto _ : state)
        benchmark::DoNotOptimize(bell::swap_keep_target(kLinkState, kLinkState, noise));
}
BENCHMARK(BM_SwapKeepTarget);

void BM_DenseOracle(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(bell::oracle::brute_force_oracle(
            {kLinkState, kLinkState}, bell::oracle::Circuit::purify));
}
BENCHMARK(BM_DenseOracle);

void BM_TwoSegmentIdealRun(benchmark::State& state) {
    sim::ChainConfig c;
    c.total_length_km = 20.0;
    c.segment_length_km = 10.0;
    c.target_pairs = 1;
    c.probe.mode = sim::ProbeConfig::Mode::ideal;
    c.purification_schedule = {0, 0};
    for (auto _ : state) benchmark::DoNotOptimize(sim::run(c));
}
BENCHMARK(BM_TwoSegmentIdealRun);

void BM_FourSegmentNoisyRun(benchmark::State& state) {
    sim::ChainConfig c;
    c.total_length_km = 40.0;
    c.segment_length_km = 10.0;
    c.target_pairs = 5;
    c.noise.epsilon = 0.005;
    for (auto _ : state) benchmark::DoNotOptimize(sim::run(c));
}
BENCHMARK(BM_FourSegmentNoisyRun);

}  // namespace

BENCHMARK_MAIN();
