#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracle.hpp"
#include "qwalk/errors.hpp"
#include "qwalk/noise.hpp"
#include "qwalk/observables.hpp"
#include "qwalk/walk.hpp"

using namespace qwalk;

namespace {

WalkConfig make_config(int sites, int steps) {
    WalkConfig c;
    c.sites = sites;
    c.steps = steps;
    c.embed_dim = std::max(20, sites);
    return c;
}

double max_prob_dev(const ModeState& state, const std::vector<oracle::cplx>& ref) {
    double worst = 0.0;
    for (std::size_t i = 0; i < state.amplitudes.size(); ++i)
        worst = std::max(worst, std::abs(std::norm(state.amplitudes[i]) - std::norm(ref[i])));
    return worst;
}

double max_amp_dev(const ModeState& state, const std::vector<oracle::cplx>& ref) {
    double worst = 0.0;
    for (std::size_t i = 0; i < state.amplitudes.size(); ++i)
        worst = std::max(worst, std::abs(state.amplitudes[i] - ref[i]));
    return worst;
}

}  // namespace

TEST_CASE("coupler layer: full row on odd steps") {
    const WalkConfig cfg = make_config(8, 4);
    const CouplerLayer l1 = build_coupler_layer(cfg, 1);
    REQUIRE(l1.pairs.size() == 4);
    CHECK(l1.pairs[0] == std::pair{0, 1});
    CHECK(l1.pairs[3] == std::pair{6, 7});
    CHECK(l1.pass_through.empty());

    const CouplerLayer l2 = build_coupler_layer(cfg, 2);
    REQUIRE(l2.pairs.size() == 3);
    CHECK(l2.pairs[0] == std::pair{1, 2});
    CHECK(l2.pairs[2] == std::pair{5, 6});
    CHECK(l2.pass_through == std::vector<int>{0, 7});
}

TEST_CASE("coupler layer: degenerate two-mode lattice") {
    const WalkConfig cfg = make_config(2, 2);
    const CouplerLayer l2 = build_coupler_layer(cfg, 2);
    CHECK(l2.pairs.empty());
    CHECK(l2.pass_through == std::vector<int>{0, 1});
}

TEST_CASE("coupler layer: OffsetPairs swaps the pattern") {
    WalkConfig cfg = make_config(8, 2);
    cfg.first_layer_parity = LayerParity::OffsetPairs;
    CHECK(build_coupler_layer(cfg, 1).pairs.size() == 3);
    CHECK(build_coupler_layer(cfg, 2).pairs.size() == 4);
}

TEST_CASE("coupler layer: step out of range") {
    const WalkConfig cfg = make_config(8, 4);
    CHECK_THROWS_AS(build_coupler_layer(cfg, 0), SchemaError);
    CHECK_THROWS_AS(build_coupler_layer(cfg, 5), SchemaError);
}

TEST_CASE("phase layer placement") {
    const WalkConfig cfg = make_config(8, 2);
    const double quarter = std::numbers::pi / 4;

    const PhaseLayer zero = build_phase_layer(cfg, 1, 0.0);
    for (double p : zero.phases) CHECK(p == 0.0);

    const PhaseLayer odd = build_phase_layer(cfg, 1, quarter);
    CHECK(odd.phases == std::vector<double>{quarter, 0, quarter, 0, quarter, 0, quarter, 0});

    const PhaseLayer even = build_phase_layer(cfg, 2, quarter);
    CHECK(even.phases == std::vector<double>{0, quarter, 0, quarter, 0, quarter, 0, 0});
}

TEST_CASE("phase layer: lower-arm convention") {
    WalkConfig cfg = make_config(8, 1);
    cfg.phase_arm = PhaseArm::Lower;
    const PhaseLayer l = build_phase_layer(cfg, 1, 1.0);
    CHECK(l.phases == std::vector<double>{0, 1, 0, 1, 0, 1, 0, 1});
}

TEST_CASE("step unitary: single Hadamard coupler") {
    const WalkConfig cfg = make_config(2, 2);
    const ComplexMatrix u = step_unitary(cfg, 1, 0.0);
    CHECK(u(0, 0).real() == doctest::Approx(kInvSqrt2).epsilon(1e-15));
    CHECK(u(0, 1).real() == doctest::Approx(kInvSqrt2).epsilon(1e-15));
    CHECK(u(1, 0).real() == doctest::Approx(kInvSqrt2).epsilon(1e-15));
    CHECK(u(1, 1).real() == doctest::Approx(-kInvSqrt2).epsilon(1e-15));
}

TEST_CASE("step unitary: pass-through layer leaves probabilities unchanged") {
    const WalkConfig cfg = make_config(2, 2);
    const ComplexMatrix u = step_unitary(cfg, 2, 1.234);
    CHECK(std::abs(u(0, 1)) == 0.0);
    CHECK(std::abs(u(1, 0)) == 0.0);
    CHECK(std::abs(u(0, 0)) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(u(1, 1)) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("step unitary: phase pi flips the first column of each block") {
    const WalkConfig cfg = make_config(4, 1);
    const ComplexMatrix u = step_unitary(cfg, 1, std::numbers::pi);
    for (std::size_t blk = 0; blk < 2; ++blk) {
        const std::size_t o = 2 * blk;
        CHECK(u(o, o).real() == doctest::Approx(-kInvSqrt2).epsilon(1e-12));
        CHECK(u(o, o + 1).real() == doctest::Approx(kInvSqrt2).epsilon(1e-12));
        CHECK(u(o + 1, o).real() == doctest::Approx(-kInvSqrt2).epsilon(1e-12));
        CHECK(u(o + 1, o + 1).real() == doctest::Approx(-kInvSqrt2).epsilon(1e-12));
        CHECK(std::abs(u(o, o).imag()) < 1e-12);
    }
}

TEST_CASE("step unitary is unitary for random phases") {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> phi(-std::numbers::pi, std::numbers::pi);
    for (int sites : {2, 6, 8, 16}) {
        const WalkConfig cfg = make_config(sites, 6);
        for (int n = 1; n <= 6; ++n)
            CHECK(step_unitary(cfg, n, phi(gen)).unitarity_defect() < 1e-12);
    }
}

TEST_CASE("evolve: one Hadamard split from the central mode") {
    const WalkConfig cfg = make_config(8, 1);
    const Evolution ev = evolve(cfg, ModeState::basis(8, 4), std::vector<double>{0.0});
    const std::vector<double> p = ev.states[1].probabilities();
    CHECK(p[2] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(p[3] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(p[0] + p[1] + p[4] + p[5] + p[6] + p[7] == doctest::Approx(0.0));
}

TEST_CASE("evolve: zero steps returns the initial state") {
    const WalkConfig cfg = make_config(8, 0);
    const ModeState init = ModeState::basis(8, 5);
    const Evolution ev = evolve(cfg, init, std::vector<double>{});
    REQUIRE(ev.states.size() == 1);
    CHECK(ev.states[0].amplitudes == init.amplitudes);
}

TEST_CASE("evolve: errors") {
    const WalkConfig cfg = make_config(8, 3);
    CHECK_THROWS_AS(evolve(cfg, ModeState::basis(8, 4), std::vector<double>{0.0}),
                    SchemaError);  // schedule too short
    ModeState bad = ModeState::basis(8, 4);
    bad.amplitudes[0] = 0.5;
    CHECK_THROWS_AS(evolve(cfg, bad, std::vector<double>(3, 0.0)), NumericError);
}

TEST_CASE("evolve matches the dense matrix-product oracle") {
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> phi(-std::numbers::pi, std::numbers::pi);
    for (int sites : {2, 4, 8}) {
        std::vector<double> phases(20);
        for (double& p : phases) p = phi(gen);
        const WalkConfig cfg = make_config(sites, 20);
        const int inj = cfg.mode_a();
        const Evolution ev = evolve(cfg, ModeState::basis(sites, inj), phases);
        const auto ref = oracle::evolve(sites, 20, phases, inj);
        for (int n = 0; n <= 20; ++n)
            CHECK(max_amp_dev(ev.states[static_cast<std::size_t>(n)],
                              ref[static_cast<std::size_t>(n)]) < 1e-12);
    }
}

TEST_CASE("evolve honors arm and parity flags (oracle cross-check)") {
    std::vector<double> phases(10);
    for (std::size_t i = 0; i < phases.size(); ++i) phases[i] = 0.3 * double(i) - 1.1;

    WalkConfig cfg = make_config(8, 10);
    cfg.phase_arm = PhaseArm::Lower;
    Evolution ev = evolve(cfg, ModeState::basis(8, 4), phases);
    auto ref = oracle::evolve(8, 10, phases, 4, false, true);
    CHECK(max_amp_dev(ev.states[10], ref[10]) < 1e-12);

    cfg.phase_arm = PhaseArm::Upper;
    cfg.first_layer_parity = LayerParity::OffsetPairs;
    ev = evolve(cfg, ModeState::basis(8, 4), phases);
    ref = oracle::evolve(8, 10, phases, 4, true, false);
    CHECK(max_amp_dev(ev.states[10], ref[10]) < 1e-12);
}

TEST_CASE("global-phase invariance: uniform phase layer changes nothing") {
    const WalkConfig cfg = make_config(8, 15);
    const double phi = 0.83;
    const Evolution plain = evolve(cfg, ModeState::basis(8, 4),
                                   std::vector<double>(15, 0.0));
    // Uniform diagonal applied by hand before every zero-phase coupler row.
    ModeState cur = ModeState::basis(8, 4);
    for (int n = 1; n <= 15; ++n) {
        for (cplx& a : cur.amplitudes) a *= std::exp(cplx{0.0, phi});
        cur.amplitudes = step_unitary(cfg, n, 0.0).apply(cur.amplitudes);
        const auto p = cur.probabilities();
        const auto q = plain.states[static_cast<std::size_t>(n)].probabilities();
        for (std::size_t j = 0; j < p.size(); ++j)
            CHECK(std::abs(p[j] - q[j]) < 1e-12);
    }
}

TEST_CASE("mirror symmetry against the reflected mesh") {
    // Reflecting the mode axis turns each Hadamard block into its
    // swap-conjugate; the reflected walk from the reflected injection must
    // reproduce the mirrored distribution at every step.
    const int sites = 8;
    const int steps = 25;
    const WalkConfig cfg = make_config(sites, steps);
    const Evolution ev = evolve(cfg, ModeState::basis(sites, 4),
                                std::vector<double>(steps, 0.0));

    std::vector<cplx> mirrored(sites);
    mirrored[sites - 4] = 1.0;  // injection 4 reflected about the center
    for (int n = 1; n <= steps; ++n) {
        const bool full = (n % 2) == 1;
        std::vector<cplx> next = mirrored;
        const int first = full ? 0 : 1;
        const int last = full ? sites - 2 : sites - 3;
        for (int a = first; a <= last; a += 2) {
            const cplx up = mirrored[static_cast<std::size_t>(a)];
            const cplx lo = mirrored[static_cast<std::size_t>(a + 1)];
            // swap-conjugated Hadamard: (-1,1;1,1)/sqrt(2)
            next[static_cast<std::size_t>(a)] = kInvSqrt2 * (-up + lo);
            next[static_cast<std::size_t>(a + 1)] = kInvSqrt2 * (up + lo);
        }
        mirrored = next;
        const auto p = ev.states[static_cast<std::size_t>(n)].probabilities();
        for (int j = 0; j < sites; ++j)
            CHECK(std::abs(p[static_cast<std::size_t>(j)] -
                           std::norm(mirrored[static_cast<std::size_t>(sites - 1 - j)])) < 1e-12);
    }
}

TEST_CASE("norm is conserved over long noisy runs") {
    const PhaseSchedule sched = draw_schedule(NoiseSpec::strong(false), 100, 99, 1);
    const WalkConfig cfg = make_config(8, 100);
    const Evolution ev = evolve(cfg, ModeState::basis(8, 4), sched.phases);
    for (const ModeState& s : ev.states)
        CHECK(std::abs(s.norm_sq() - 1.0) <= 1e-12);
}

TEST_CASE("compose_total_unitary: zero steps is the identity embedding") {
    WalkConfig cfg = make_config(8, 0);
    cfg.embed_dim = 20;
    const ComplexMatrix u = compose_total_unitary(cfg, std::vector<double>{});
    REQUIRE(u.size() == 20);
    for (std::size_t i = 0; i < 20; ++i)
        for (std::size_t j = 0; j < 20; ++j)
            CHECK(u(i, j) == (i == j ? cplx{1.0} : cplx{}));
}

TEST_CASE("compose_total_unitary: one zero-phase layer is block Hadamards") {
    WalkConfig cfg = make_config(8, 1);
    cfg.embed_dim = 8;
    const ComplexMatrix u = compose_total_unitary(cfg, std::vector<double>{0.0});
    for (std::size_t blk = 0; blk < 4; ++blk) {
        const std::size_t o = 2 * blk;
        CHECK(u(o, o).real() == doctest::Approx(kInvSqrt2));
        CHECK(u(o + 1, o + 1).real() == doctest::Approx(-kInvSqrt2));
    }
    CHECK(u.unitarity_defect() < 1e-12);
}

TEST_CASE("compose_total_unitary agrees with evolve on a fixture schedule") {
    const PhaseSchedule sched = load_fixture_schedule(FixtureName::SortedStrong);
    WalkConfig cfg = make_config(8, 20);
    cfg.embed_dim = 20;
    const ComplexMatrix u = compose_total_unitary(cfg, sched.phases);
    CHECK(u.unitarity_defect() < 1e-12);

    const Evolution ev = evolve(cfg, ModeState::basis(8, 4), sched.phases);
    std::vector<cplx> inj(20);
    inj[3] = 1.0;
    const std::vector<cplx> out = u.apply(inj);
    for (std::size_t j = 0; j < 8; ++j)
        CHECK(std::abs(std::norm(out[j]) -
                       ev.states[20].probabilities()[j]) < 1e-12);
    for (std::size_t j = 8; j < 20; ++j) CHECK(std::abs(out[j]) < 1e-12);
}

TEST_CASE("compose_total_unitary rejects embed_dim < sites") {
    WalkConfig cfg = make_config(8, 1);
    cfg.embed_dim = 4;
    CHECK_THROWS_AS(compose_total_unitary(cfg, std::vector<double>{0.0}), SchemaError);
}

TEST_CASE("config validation messages are distinct") {
    WalkConfig odd = make_config(7, 1);
    CHECK_THROWS_WITH_AS(odd.validate(),
                         doctest::Contains("walk.sites"), SchemaError);
    WalkConfig neg = make_config(8, -1);
    CHECK_THROWS_WITH_AS(neg.validate(),
                         doctest::Contains("walk.steps"), SchemaError);
    WalkConfig inj = make_config(8, 1);
    inj.injection_a = 9;
    CHECK_THROWS_WITH_AS(inj.validate(),
                         doctest::Contains("injection_a"), SchemaError);
}
