#pragma once

#include <span>
#include <utility>
#include <vector>

#include "qwalk/complexmat.hpp"

namespace qwalk {

/// Which brick-wall row pattern step 1 uses. FullPairs: step 1 couples
/// (1,2),(3,4),...; OffsetPairs: step 1 couples (2,3),(4,5),... instead.
enum class LayerParity { FullPairs, OffsetPairs };

/// Which arm of each coupled pair receives the per-step phase.
enum class PhaseArm { Upper, Lower };

struct WalkConfig {
    int sites = 8;   // 2M lattice modes, even
    int steps = 0;   // N
    int injection_a = 0;  // 1-based mode index; 0 selects the default M
    int injection_b = 0;  // 1-based mode index; 0 selects the default M+1
    LayerParity first_layer_parity = LayerParity::FullPairs;
    PhaseArm phase_arm = PhaseArm::Upper;
    int embed_dim = 20;
    double edge_leak_threshold = 1e-10;

    int mode_a() const { return injection_a > 0 ? injection_a : sites / 2; }
    int mode_b() const { return injection_b > 0 ? injection_b : sites / 2 + 1; }

    /// Throws SchemaError with a distinct message per violated constraint.
    void validate() const;
};

/// Walker wavefunction over the lattice modes.
struct ModeState {
    std::vector<cplx> amplitudes;

    double norm_sq() const;
    std::vector<double> probabilities() const;

    /// Unit amplitude at a single 1-based mode.
    static ModeState basis(int sites, int mode);
};

/// One brick-wall row: disjoint adjacent pairs plus identity pass-throughs.
/// Mode indices are 0-based here and in PhaseLayer.
struct CouplerLayer {
    std::vector<std::pair<int, int>> pairs;
    std::vector<int> pass_through;
};

/// Per-mode phases (radians) applied before the coupler row of the same step.
struct PhaseLayer {
    std::vector<double> phases;
};

// Hadamard coupler entries: (1,1;1,-1)/sqrt(2).
inline constexpr double kInvSqrt2 = 0.70710678118654752440;

CouplerLayer build_coupler_layer(const WalkConfig& config, int step);

/// Places phi on the configured arm of every pair of the step's coupler row;
/// all other modes get zero. A uniform phase on all modes would be an
/// unobservable global phase.
PhaseLayer build_phase_layer(const WalkConfig& config, int step, double phi);

/// Dense step unitary M_BS(step) * M_phi(step).
ComplexMatrix step_unitary(const WalkConfig& config, int step, double phi);

struct Evolution {
    std::vector<ModeState> states;   // states[n] = state after n steps, n = 0..N
    double max_edge_probability = 0.0;
    bool edge_leak = false;          // edge occupancy exceeded the threshold
};

/// Applies config.steps step unitaries to the initial state. Norm is checked
/// to 1e-12 after every step. phases must supply at least config.steps values.
Evolution evolve(const WalkConfig& config, const ModeState& initial,
                 std::span<const double> phases);

/// Product U(N)...U(1) embedded as the top-left block of an
/// embed_dim x embed_dim identity.
ComplexMatrix compose_total_unitary(const WalkConfig& config,
                                    std::span<const double> phases);

}  // namespace qwalk
