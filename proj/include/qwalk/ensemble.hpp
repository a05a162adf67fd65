#pragma once

#include <cstdint>
#include <vector>

#include "qwalk/noise.hpp"
#include "qwalk/observables.hpp"
#include "qwalk/walk.hpp"

namespace qwalk {

struct EnsembleSpec {
    WalkConfig walk;
    NoiseSpec noise;
    int configurations = 100;  // R
    std::uint64_t seed = 0;

    void validate() const;
};

struct EnsembleResult {
    /// Configuration-averaged two-injection distributions, one per step 0..N.
    std::vector<Distribution> averaged;
    /// Variance of the averaged distribution per step (the central curve).
    VarianceSeries central_variance;
    /// Mean over configurations of the per-configuration variances.
    VarianceSeries mean_of_variances;
    /// Population std-dev over configurations of the per-configuration
    /// variances (the plotted band half-width).
    std::vector<double> std_band;
    /// R x (N+1) per-configuration variance matrix, kept for peak analysis.
    std::vector<std::vector<double>> per_config_variance;
};

/// Runs R independent noise configurations (config_index 1..R), each evolved
/// from both injection modes. Reduction is in fixed index order so the result
/// is bit-identical however the work is scheduled.
EnsembleResult run_ensemble(const EnsembleSpec& spec);

/// Least-squares slope of log sigma^2 against log n over steps [n_lo, n_hi].
double classify_scaling(const VarianceSeries& series, int n_lo, int n_hi);

}  // namespace qwalk
