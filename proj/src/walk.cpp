#include "qwalk/walk.hpp"

#include <cmath>
#include <string>

#include "qwalk/errors.hpp"

namespace qwalk {

namespace {

constexpr double kNormTol = 1e-12;

bool is_full_row(const WalkConfig& config, int step) {
    const bool odd = (step % 2) == 1;
    return config.first_layer_parity == LayerParity::FullPairs ? odd : !odd;
}

}  // namespace

void WalkConfig::validate() const {
    if (sites < 2 || sites % 2 != 0)
        throw SchemaError("walk.sites must be an even integer >= 2, got " +
                          std::to_string(sites));
    if (steps < 0)
        throw SchemaError("walk.steps must be >= 0, got " + std::to_string(steps));
    if (mode_a() < 1 || mode_a() > sites)
        throw SchemaError("walk.injection_a out of range [1," +
                          std::to_string(sites) + "]");
    if (mode_b() < 1 || mode_b() > sites)
        throw SchemaError("walk.injection_b out of range [1," +
                          std::to_string(sites) + "]");
    if (embed_dim < sites)
        throw SchemaError("walk.embed_dim must be >= walk.sites");
    if (!(edge_leak_threshold >= 0.0))
        throw SchemaError("walk.edge_leak_threshold must be >= 0");
}

double ModeState::norm_sq() const {
    double s = 0.0;
    for (const cplx& a : amplitudes) s += std::norm(a);
    return s;
}

std::vector<double> ModeState::probabilities() const {
    std::vector<double> p(amplitudes.size());
    for (std::size_t i = 0; i < amplitudes.size(); ++i) p[i] = std::norm(amplitudes[i]);
    return p;
}

ModeState ModeState::basis(int sites, int mode) {
    if (mode < 1 || mode > sites)
        throw SchemaError("injection mode out of range");
    ModeState s;
    s.amplitudes.assign(static_cast<std::size_t>(sites), cplx{});
    s.amplitudes[static_cast<std::size_t>(mode - 1)] = 1.0;
    return s;
}

CouplerLayer build_coupler_layer(const WalkConfig& config, int step) {
    if (step < 1 || step > config.steps)
        throw SchemaError("step " + std::to_string(step) + " out of range [1," +
                          std::to_string(config.steps) + "]");
    CouplerLayer layer;
    const int m2 = config.sites;
    if (is_full_row(config, step)) {
        for (int i = 0; i + 1 < m2; i += 2) layer.pairs.emplace_back(i, i + 1);
    } else {
        // Edge modes pass through untouched: hard reflection at the boundary.
        for (int i = 1; i + 1 < m2 - 1; i += 2) layer.pairs.emplace_back(i, i + 1);
        layer.pass_through.push_back(0);
        layer.pass_through.push_back(m2 - 1);
    }
    return layer;
}

PhaseLayer build_phase_layer(const WalkConfig& config, int step, double phi) {
    if (!std::isfinite(phi)) throw SchemaError("phase must be finite");
    const CouplerLayer layer = build_coupler_layer(config, step);
    PhaseLayer out;
    out.phases.assign(static_cast<std::size_t>(config.sites), 0.0);
    for (const auto& [upper, lower] : layer.pairs) {
        const int arm = config.phase_arm == PhaseArm::Upper ? upper : lower;
        out.phases[static_cast<std::size_t>(arm)] = phi;
    }
    return out;
}

ComplexMatrix step_unitary(const WalkConfig& config, int step, double phi) {
    const CouplerLayer couplers = build_coupler_layer(config, step);
    const PhaseLayer phase = build_phase_layer(config, step, phi);
    const std::size_t n = static_cast<std::size_t>(config.sites);
    ComplexMatrix u(n);
    // M_BS * M_phi: column j of M_BS scaled by e^{i phi_j}.
    for (std::size_t j = 0; j < n; ++j) {
        const cplx col = std::exp(cplx{0.0, phase.phases[j]});
        u(j, j) = col;  // provisional identity action, overwritten for pairs
    }
    for (const auto& [a, b] : couplers.pairs) {
        const cplx ca = std::exp(cplx{0.0, phase.phases[static_cast<std::size_t>(a)]});
        const cplx cb = std::exp(cplx{0.0, phase.phases[static_cast<std::size_t>(b)]});
        u(static_cast<std::size_t>(a), static_cast<std::size_t>(a)) = kInvSqrt2 * ca;
        u(static_cast<std::size_t>(a), static_cast<std::size_t>(b)) = kInvSqrt2 * cb;
        u(static_cast<std::size_t>(b), static_cast<std::size_t>(a)) = kInvSqrt2 * ca;
        u(static_cast<std::size_t>(b), static_cast<std::size_t>(b)) = -kInvSqrt2 * cb;
    }
    return u;
}

Evolution evolve(const WalkConfig& config, const ModeState& initial,
                 std::span<const double> phases) {
    config.validate();
    if (initial.amplitudes.size() != static_cast<std::size_t>(config.sites))
        throw SchemaError("initial state size does not match walk.sites");
    if (std::abs(initial.norm_sq() - 1.0) > kNormTol)
        throw NumericError("initial state is not normalized");
    if (phases.size() < static_cast<std::size_t>(config.steps))
        throw SchemaError("phase schedule shorter than walk.steps");

    Evolution ev;
    ev.states.reserve(static_cast<std::size_t>(config.steps) + 1);
    ev.states.push_back(initial);

    ModeState cur = initial;
    for (int n = 1; n <= config.steps; ++n) {
        const CouplerLayer couplers = build_coupler_layer(config, n);
        const PhaseLayer phase = build_phase_layer(config, n, phases[static_cast<std::size_t>(n - 1)]);
        for (std::size_t j = 0; j < cur.amplitudes.size(); ++j)
            cur.amplitudes[j] *= std::exp(cplx{0.0, phase.phases[j]});
        for (const auto& [a, b] : couplers.pairs) {
            const cplx up = cur.amplitudes[static_cast<std::size_t>(a)];
            const cplx lo = cur.amplitudes[static_cast<std::size_t>(b)];
            cur.amplitudes[static_cast<std::size_t>(a)] = kInvSqrt2 * (up + lo);
            cur.amplitudes[static_cast<std::size_t>(b)] = kInvSqrt2 * (up - lo);
        }
        if (std::abs(cur.norm_sq() - 1.0) > kNormTol)
            throw NumericError("norm drifted beyond 1e-12 at step " + std::to_string(n));
        const double edge = std::max(std::norm(cur.amplitudes.front()),
                                     std::norm(cur.amplitudes.back()));
        ev.max_edge_probability = std::max(ev.max_edge_probability, edge);
        ev.states.push_back(cur);
    }
    ev.edge_leak = ev.max_edge_probability > config.edge_leak_threshold;
    return ev;
}

ComplexMatrix compose_total_unitary(const WalkConfig& config,
                                    std::span<const double> phases) {
    config.validate();
    if (phases.size() < static_cast<std::size_t>(config.steps))
        throw SchemaError("phase schedule shorter than walk.steps");
    ComplexMatrix total = ComplexMatrix::identity(static_cast<std::size_t>(config.sites));
    for (int n = 1; n <= config.steps; ++n)
        total = step_unitary(config, n, phases[static_cast<std::size_t>(n - 1)]) * total;

    const std::size_t d = static_cast<std::size_t>(config.embed_dim);
    ComplexMatrix out = ComplexMatrix::identity(d);
    for (std::size_t i = 0; i < total.size(); ++i)
        for (std::size_t j = 0; j < total.size(); ++j) out(i, j) = total(i, j);
    if (out.unitarity_defect() > 1e-12)
        throw NumericError("composed unitary fails the 1e-12 unitarity check");
    return out;
}

}  // namespace qwalk
