#pragma once

#include <vector>

#include "qwalk/walk.hpp"

namespace qwalk {

/// Per-mode output probabilities at one step.
struct Distribution {
    std::vector<double> probabilities;
    int step = 0;

    void validate() const;  // nonnegative entries, sum 1 within 1e-9
};

/// sigma^2(n) for n = 0..N on the half-integer position grid
/// x_j = j - (2M+1)/2 centered at the lattice middle (1-based j).
struct VarianceSeries {
    std::vector<double> values;
};

struct PeakFit {
    std::vector<int> peak_steps;    // ascending
    std::vector<int> peak_orders;   // 1,2,3,...
    double slope = 0.0;
    double intercept = 0.0;
    double residual_norm = 0.0;
    bool has_fit = false;
};

Distribution distribution(const ModeState& state, int step);

/// (P_a + P_b)/2, the two-injection average.
Distribution average_pair(const Distribution& a, const Distribution& b);

double position_of(std::size_t index0, std::size_t modes);

struct MeanVariance {
    double mean = 0.0;
    double variance = 0.0;
};

MeanVariance mean_and_variance(const Distribution& dist);

/// Strict local maxima, endpoints excluded; a plateau counts once, at its
/// earliest step. Series index n is the step label.
PeakFit find_peaks(const VarianceSeries& series);

/// Ordinary least squares of peak step against peak order. Requires >= 2 peaks.
PeakFit fit_peaks_linear(const PeakFit& peaks);

/// max_i |p_i - q_i|, the max-pointwise-difference distance.
double tvd(const Distribution& p, const Distribution& q);

}  // namespace qwalk
