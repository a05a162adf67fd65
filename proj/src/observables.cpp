#include "qwalk/observables.hpp"

#include <cmath>
#include <string>

#include "qwalk/errors.hpp"

namespace qwalk {

void Distribution::validate() const {
    double sum = 0.0;
    for (double p : probabilities) {
        if (!(p >= 0.0))
            throw NumericError("distribution has a negative entry");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw NumericError("distribution sum deviates from 1 beyond 1e-9");
}

Distribution distribution(const ModeState& state, int step) {
    Distribution d;
    d.step = step;
    d.probabilities = state.probabilities();
    d.validate();
    return d;
}

Distribution average_pair(const Distribution& a, const Distribution& b) {
    if (a.probabilities.size() != b.probabilities.size())
        throw SchemaError("average_pair: distribution lengths differ");
    if (a.step != b.step)
        throw SchemaError("average_pair: step labels differ");
    Distribution out;
    out.step = a.step;
    out.probabilities.resize(a.probabilities.size());
    for (std::size_t i = 0; i < out.probabilities.size(); ++i)
        out.probabilities[i] = 0.5 * (a.probabilities[i] + b.probabilities[i]);
    return out;
}

double position_of(std::size_t index0, std::size_t modes) {
    return static_cast<double>(index0) - (static_cast<double>(modes) - 1.0) / 2.0;
}

MeanVariance mean_and_variance(const Distribution& dist) {
    const std::size_t m = dist.probabilities.size();
    double mean = 0.0, second = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        const double x = position_of(j, m);
        mean += x * dist.probabilities[j];
        second += x * x * dist.probabilities[j];
    }
    return {mean, second - mean * mean};
}

PeakFit find_peaks(const VarianceSeries& series) {
    PeakFit out;
    const auto& v = series.values;
    if (v.size() < 3) return out;
    std::size_t i = 1;
    while (i + 1 < v.size()) {
        if (v[i] > v[i - 1]) {
            std::size_t j = i;
            while (j + 1 < v.size() && v[j + 1] == v[i]) ++j;  // plateau run
            if (j + 1 < v.size() && v[j + 1] < v[i]) {
                out.peak_steps.push_back(static_cast<int>(i));
                out.peak_orders.push_back(static_cast<int>(out.peak_steps.size()));
            }
            i = j + 1;
        } else {
            ++i;
        }
    }
    return out;
}

PeakFit fit_peaks_linear(const PeakFit& peaks) {
    const std::size_t k = peaks.peak_steps.size();
    if (k < 2)
        throw SchemaError("peak fit requires at least 2 peaks, found " + std::to_string(k));
    PeakFit out = peaks;
    double so = 0.0, ss = 0.0, soo = 0.0, sos = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        const double o = static_cast<double>(peaks.peak_orders[i]);
        const double s = static_cast<double>(peaks.peak_steps[i]);
        so += o;
        ss += s;
        soo += o * o;
        sos += o * s;
    }
    const double n = static_cast<double>(k);
    const double denom = n * soo - so * so;
    out.slope = (n * sos - so * ss) / denom;
    out.intercept = (ss - out.slope * so) / n;
    double r2 = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        const double pred = out.slope * peaks.peak_orders[i] + out.intercept;
        const double res = peaks.peak_steps[i] - pred;
        r2 += res * res;
    }
    out.residual_norm = std::sqrt(r2);
    out.has_fit = true;
    return out;
}

double tvd(const Distribution& p, const Distribution& q) {
    if (p.probabilities.size() != q.probabilities.size())
        throw SchemaError("tvd: distribution lengths differ");
    double worst = 0.0;
    for (std::size_t i = 0; i < p.probabilities.size(); ++i)
        worst = std::max(worst, std::abs(p.probabilities[i] - q.probabilities[i]));
    return worst;
}

}  // namespace qwalk
