#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qwalk/complexmat.hpp"
#include "qwalk/ensemble.hpp"
#include "qwalk/noise.hpp"
#include "qwalk/observables.hpp"
#include "qwalk/walk.hpp"

namespace qwalk {

/// Parsed and validated run manifest (strict JSON schema, unknown keys
/// rejected).
struct RunManifest {
    WalkConfig walk;
    NoiseSpec noise;
    int configurations = 100;
    std::uint64_t seed = 1;
    std::string output_directory = ".";
    std::vector<std::string> formats{"csv"};
};

RunManifest parse_manifest_file(const std::string& path);
RunManifest parse_manifest_text(const std::string& text, const std::string& origin);

/// Tabular distribution file: header "step,p1,...,pK", one row per step.
/// Rows are renormalized on read; raw row sums deviating from 1 by more than
/// max(tolerance, 1e-9) are an error.
struct StepDistributions {
    std::vector<int> steps;
    std::vector<std::vector<double>> rows;  // normalized
};

StepDistributions read_distribution_file(const std::string& path,
                                         double raw_sum_tolerance = 1e-3);

void write_distribution_file(const std::string& path, const StepDistributions& data);

struct VarianceFile {
    std::vector<int> steps;
    VarianceSeries series;
    std::vector<double> mean_position;  // empty when absent from file
};

void write_variance_file(const std::string& path, const VarianceFile& data);
VarianceFile read_variance_file(const std::string& path);

void write_unitary_file(const std::string& path, const ComplexMatrix& u);
ComplexMatrix read_unitary_file(const std::string& path);

// CLI command bodies. Each throws SchemaError / NumericError / IoError; the
// CLI maps those to exit codes 2 / 3 / 4.

struct CommandOptions {
    std::optional<FixtureName> fixture;      // overrides the manifest noise
    std::optional<std::uint64_t> seed;       // overrides manifest seed
    std::optional<std::string> out_dir;      // overrides manifest output dir
};

void cmd_simulate(const RunManifest& manifest, const CommandOptions& opts);
void cmd_ensemble(const RunManifest& manifest, const CommandOptions& opts);
void cmd_peaks(const std::string& variance_file, const CommandOptions& opts);
void cmd_compare(const std::string& measured_file, const std::string& simulated_file,
                 const CommandOptions& opts);
void cmd_unitary(const RunManifest& manifest, const CommandOptions& opts);
void cmd_phases(const RunManifest& manifest, const CommandOptions& opts);

}  // namespace qwalk
