#include "qwalk/ensemble.hpp"

#include <cmath>
#include <string>

#include "qwalk/errors.hpp"

namespace qwalk {

void EnsembleSpec::validate() const {
    walk.validate();
    noise.validate();
    if (configurations < 1)
        throw SchemaError("ensemble.configurations must be >= 1");
}

EnsembleResult run_ensemble(const EnsembleSpec& spec) {
    spec.validate();
    const int n_steps = spec.walk.steps;
    const std::size_t rows = static_cast<std::size_t>(n_steps) + 1;
    const std::size_t modes = static_cast<std::size_t>(spec.walk.sites);

    EnsembleResult res;
    res.per_config_variance.reserve(static_cast<std::size_t>(spec.configurations));
    std::vector<std::vector<double>> accum(rows, std::vector<double>(modes, 0.0));

    const ModeState init_a = ModeState::basis(spec.walk.sites, spec.walk.mode_a());
    const ModeState init_b = ModeState::basis(spec.walk.sites, spec.walk.mode_b());

    for (int r = 1; r <= spec.configurations; ++r) {
        const PhaseSchedule schedule =
            draw_schedule(spec.noise, std::max(n_steps, 1), spec.seed,
                          static_cast<std::uint64_t>(r));
        const Evolution ev_a = evolve(spec.walk, init_a, schedule.phases);
        const Evolution ev_b = evolve(spec.walk, init_b, schedule.phases);

        std::vector<double> config_var(rows);
        for (std::size_t n = 0; n < rows; ++n) {
            const Distribution pm =
                average_pair(distribution(ev_a.states[n], static_cast<int>(n)),
                             distribution(ev_b.states[n], static_cast<int>(n)));
            for (std::size_t j = 0; j < modes; ++j) accum[n][j] += pm.probabilities[j];
            config_var[n] = mean_and_variance(pm).variance;
        }
        res.per_config_variance.push_back(std::move(config_var));
    }

    const double inv_r = 1.0 / static_cast<double>(spec.configurations);
    res.averaged.resize(rows);
    res.central_variance.values.resize(rows);
    res.mean_of_variances.values.resize(rows);
    res.std_band.resize(rows);
    for (std::size_t n = 0; n < rows; ++n) {
        Distribution& avg = res.averaged[n];
        avg.step = static_cast<int>(n);
        avg.probabilities.resize(modes);
        for (std::size_t j = 0; j < modes; ++j) avg.probabilities[j] = accum[n][j] * inv_r;
        avg.validate();
        res.central_variance.values[n] = mean_and_variance(avg).variance;

        double mean_v = 0.0;
        for (const auto& row : res.per_config_variance) mean_v += row[n];
        mean_v *= inv_r;
        double sq = 0.0;
        for (const auto& row : res.per_config_variance) {
            const double d = row[n] - mean_v;
            sq += d * d;
        }
        res.mean_of_variances.values[n] = mean_v;
        res.std_band[n] = std::sqrt(sq * inv_r);  // population convention
    }
    return res;
}

double classify_scaling(const VarianceSeries& series, int n_lo, int n_hi) {
    if (n_lo < 1) throw SchemaError("scaling window must start at n >= 1");
    if (n_hi < n_lo || static_cast<std::size_t>(n_hi) >= series.values.size())
        throw SchemaError("scaling window out of range");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const double count = static_cast<double>(n_hi - n_lo + 1);
    for (int n = n_lo; n <= n_hi; ++n) {
        const double v = series.values[static_cast<std::size_t>(n)];
        if (!(v > 0.0))
            throw NumericError("nonpositive variance at step " + std::to_string(n) +
                               " inside the scaling window");
        const double x = std::log(static_cast<double>(n));
        const double y = std::log(v);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (count * sxy - sx * sy) / (count * sxx - sx * sx);
}

}  // namespace qwalk
