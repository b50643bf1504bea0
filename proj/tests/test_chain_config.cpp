#include <cmath>
#include <vector>

#include <doctest.h>

#include "repeaterlab/chain_config.hpp"
#include "repeaterlab/errors.hpp"
#include "repeaterlab/probe_model.hpp"

using doctest::Approx;
using namespace rlab;
using sim::ChainConfig;
using sim::ProbeConfig;

TEST_CASE("qubit budget grows by two per doubling") {
    CHECK(sim::qubit_budget(20.0, 10.0) == 4);
    CHECK(sim::qubit_budget(160.0, 10.0) == 10);
    CHECK(sim::qubit_budget(1280.0, 10.0) == 16);
    CHECK(sim::qubit_budget(10.0, 10.0) == 2);
    CHECK_THROWS_AS(sim::qubit_budget(100.0, 10.0), ValidationError);
    CHECK_THROWS_AS(sim::qubit_budget(10.0, 20.0), ValidationError);
    CHECK_THROWS_AS(sim::qubit_budget(15.0, 10.0), ValidationError);
}

TEST_CASE("schedule presets deepen with the chain") {
    CHECK(sim::default_schedule(0) == std::vector<int>{2});
    CHECK(sim::default_schedule(1) == std::vector<int>{3, 0});
    CHECK(sim::default_schedule(2) == std::vector<int>{3, 2, 0});
    CHECK(sim::default_schedule(3) == std::vector<int>{3, 2, 1, 0});
    CHECK(sim::default_schedule(4) == std::vector<int>{3, 2, 2, 1, 0});
    CHECK(sim::default_schedule(7) == std::vector<int>{3, 2, 1, 1, 1, 1, 1, 1});
    CHECK(sim::default_schedule(9).size() == 10);
    CHECK_THROWS_AS(sim::default_schedule(-1), ValidationError);
}

TEST_CASE("nesting level count") {
    ChainConfig c;
    CHECK(sim::nesting_levels(c) == 4);  // 160 km / 10 km
    c.total_length_km = 1280.0;
    CHECK(sim::nesting_levels(c) == 7);
    c.total_length_km = 10.0;
    CHECK(sim::nesting_levels(c) == 0);
}

TEST_CASE("validation rejects out-of-range fields") {
    const ChainConfig base;
    CHECK_NOTHROW(sim::validate(base));

    auto broken = [&](auto mutate) {
        ChainConfig c = base;
        mutate(c);
        CHECK_THROWS_AS(sim::validate(c), ValidationError);
    };

    broken([](ChainConfig& c) { c.total_length_km = 0.0; });
    broken([](ChainConfig& c) { c.segment_length_km = -1.0; });
    broken([](ChainConfig& c) { c.total_length_km = 100.0; });  // 10 segments
    broken([](ChainConfig& c) { c.qubits_per_station = 1; });
    broken([](ChainConfig& c) { c.fiber_loss_db_per_km = -0.1; });
    broken([](ChainConfig& c) { c.light_speed_km_per_ms = 0.0; });
    broken([](ChainConfig& c) { c.target_pairs = 0; });
    broken([](ChainConfig& c) { c.noise.epsilon = 1.0; });
    broken([](ChainConfig& c) { c.noise.epsilon = -0.2; });
    broken([](ChainConfig& c) { c.probe.p_c = 0.0; });
    broken([](ChainConfig& c) { c.probe.theta = 0.0; });
    broken([](ChainConfig& c) { c.probe.theta = 2.0; });
    broken([](ChainConfig& c) {
        c.probe.mode = ProbeConfig::Mode::fixed;
        c.probe.d = 0.0;
    });
    broken([](ChainConfig& c) { c.purification_schedule = {3, 2, 0}; });  // needs 5
    broken([](ChainConfig& c) { c.purification_schedule = {3, 2, 2, 1, -1}; });
}

TEST_CASE("ideal probes skip the window checks") {
    ChainConfig c;
    c.probe.mode = ProbeConfig::Mode::ideal;
    c.probe.p_c = 0.0;
    c.probe.theta = 0.0;
    CHECK_NOTHROW(sim::validate(c));
}

TEST_CASE("stations below the default budget need an explicit schedule") {
    ChainConfig c;
    c.qubits_per_station = 4;  // budget at 160/10 is 10
    CHECK_THROWS_AS(sim::validate(c), ValidationError);
    c.purification_schedule = {1, 0, 0, 0, 0};
    CHECK_NOTHROW(sim::validate(c));
}

TEST_CASE("resolution fills the defaulted fields and keeps the explicit ones") {
    ChainConfig c;
    const ChainConfig r = sim::resolved(c);
    CHECK(r.qubits_per_station == 10);
    CHECK(r.purification_schedule == sim::default_schedule(4));
    CHECK(r.total_length_km == c.total_length_km);
    CHECK(r.rng_seed == c.rng_seed);

    ChainConfig e;
    e.qubits_per_station = 12;
    e.purification_schedule = {1, 1, 1, 1, 1};
    const ChainConfig re = sim::resolved(e);
    CHECK(re.qubits_per_station == 12);
    CHECK(re.purification_schedule == e.purification_schedule);
}

TEST_CASE("ideal link model is lossless and pure") {
    ChainConfig c;
    c.probe.mode = ProbeConfig::Mode::ideal;
    const sim::LinkModel m = sim::resolve_link_model(c);
    CHECK(m.success_prob == 1.0);
    CHECK(m.state[bell::kPsiPlus] == 1.0);
    CHECK(m.state[bell::kPsiMinus] == 0.0);
    CHECK(m.state[bell::kPhiPlus] == 0.0);
    CHECK(m.state[bell::kPhiMinus] == 0.0);
    CHECK(m.d == 0.0);
}

TEST_CASE("fixed link model passes the distinguishability through") {
    ChainConfig c;
    c.probe.mode = ProbeConfig::Mode::fixed;
    c.probe.d = 1.3;
    const sim::LinkModel m = sim::resolve_link_model(c);
    CHECK(m.d == 1.3);
    CHECK(m.eta ==
          Approx(std::sqrt(probe::fiber_transmission(10.0, 0.17))).epsilon(1e-14));

    probe::ProbeParams p =
        probe::params_for_distinguishability(1.3, c.probe.p_c, m.eta, c.probe.theta);
    CHECK(m.success_prob == probe::success_probability(p));
    CHECK(m.state.fidelity() == probe::postselected_state(p).fidelity());
}

TEST_CASE("optimized link model lands on the window optimum") {
    ChainConfig c;  // 10 km segments, 0.17 dB/km, p_c = 0.5
    const sim::LinkModel m = sim::resolve_link_model(c);
    const auto opt = probe::optimize_distinguishability(c.probe.p_c, m.eta);
    CHECK(m.d == opt.d_opt);
    CHECK(m.d == Approx(1.64678278243122).epsilon(1e-5));
    CHECK(m.success_prob == Approx(0.36319652292209564).epsilon(1e-5));
    CHECK(m.state.fidelity() == Approx(0.7727959260574951).epsilon(1e-7));
    CHECK(m.state.is_valid(1e-12));
}

TEST_CASE("longer segments give weaker links") {
    ChainConfig near;
    ChainConfig far;
    far.total_length_km = 320.0;
    far.segment_length_km = 20.0;
    const auto mn = sim::resolve_link_model(near);
    const auto mf = sim::resolve_link_model(far);
    CHECK(mf.eta < mn.eta);
    CHECK(mf.state.fidelity() < mn.state.fidelity());
}
