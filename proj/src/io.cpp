#include "qwalk/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "qwalk/errors.hpp"

namespace qwalk {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, const std::string& section,
                         std::initializer_list<const char*> allowed) {
    for (const auto& [key, _] : obj.items()) {
        if (std::find_if(allowed.begin(), allowed.end(),
                         [&](const char* k) { return key == k; }) == allowed.end())
            throw SchemaError("unknown key \"" + section + "." + key + "\" in manifest");
    }
}

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    return out;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open for reading: " + path);
    return in;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream ls(line);
    while (std::getline(ls, cur, ',')) out.push_back(cur);
    return out;
}

double parse_double(const std::string& s, const std::string& where) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw SchemaError(where + ": not a number: \"" + s + "\"");
    }
}

std::string out_path(const RunManifest& manifest, const CommandOptions& opts,
                     const std::string& file) {
    const std::string dir = opts.out_dir.value_or(manifest.output_directory);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory: " + dir);
    return (std::filesystem::path(dir) / file).string();
}

/// Resolves the phase schedule a single-run command uses: an explicit fixture
/// wins, otherwise the manifest noise spec with stream (seed, 1).
PhaseSchedule resolve_schedule(const RunManifest& manifest, const CommandOptions& opts) {
    if (opts.fixture) {
        PhaseSchedule s = load_fixture_schedule(*opts.fixture);
        if (s.phases.size() < static_cast<std::size_t>(manifest.walk.steps))
            throw SchemaError("fixture provides " + std::to_string(s.phases.size()) +
                              " phases but walk.steps = " +
                              std::to_string(manifest.walk.steps));
        return s;
    }
    const std::uint64_t seed = opts.seed.value_or(manifest.seed);
    return draw_schedule(manifest.noise, std::max(manifest.walk.steps, 1), seed, 1);
}

struct SingleRun {
    std::vector<Distribution> averaged;  // P_M per step 0..N
    VarianceFile variance;
    PhaseSchedule schedule;
};

SingleRun run_single(const RunManifest& manifest, const CommandOptions& opts) {
    SingleRun run;
    run.schedule = resolve_schedule(manifest, opts);
    const WalkConfig& cfg = manifest.walk;
    const Evolution ev_a = evolve(cfg, ModeState::basis(cfg.sites, cfg.mode_a()),
                                  run.schedule.phases);
    const Evolution ev_b = evolve(cfg, ModeState::basis(cfg.sites, cfg.mode_b()),
                                  run.schedule.phases);
    if (ev_a.edge_leak || ev_b.edge_leak)
        std::cerr << "warning: edge occupancy exceeded "
                  << cfg.edge_leak_threshold << " (max "
                  << std::max(ev_a.max_edge_probability, ev_b.max_edge_probability)
                  << "); lattice too small for unbounded intent\n";
    for (int n = 0; n <= cfg.steps; ++n) {
        const std::size_t un = static_cast<std::size_t>(n);
        Distribution pm = average_pair(distribution(ev_a.states[un], n),
                                       distribution(ev_b.states[un], n));
        const MeanVariance mv = mean_and_variance(pm);
        run.variance.steps.push_back(n);
        run.variance.series.values.push_back(mv.variance);
        run.variance.mean_position.push_back(mv.mean);
        run.averaged.push_back(std::move(pm));
    }
    return run;
}

}  // namespace

RunManifest parse_manifest_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open manifest: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_manifest_text(buf.str(), path);
}

RunManifest parse_manifest_text(const std::string& text, const std::string& origin) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        // Translate the byte offset into a line number.
        std::size_t line = 1;
        for (std::size_t i = 0; i < std::min(e.byte, text.size()); ++i)
            if (text[i] == '\n') ++line;
        throw SchemaError(origin + ":" + std::to_string(line) + ": " + e.what());
    }
    if (!doc.is_object()) throw SchemaError(origin + ": manifest must be a JSON object");
    reject_unknown_keys(doc, "", {"walk", "noise", "ensemble", "output"});

    RunManifest m;
    if (!doc.contains("walk")) throw SchemaError("manifest is missing the \"walk\" section");
    {
        const json& w = doc["walk"];
        reject_unknown_keys(w, "walk",
                            {"sites", "steps", "injection_a", "injection_b",
                             "first_layer_parity", "phase_arm", "embed_dim",
                             "edge_leak_threshold"});
        if (!w.contains("sites") || !w.contains("steps"))
            throw SchemaError("walk.sites and walk.steps are required");
        if (!w["sites"].is_number_integer())
            throw SchemaError("walk.sites must be an integer");
        if (!w["steps"].is_number_integer())
            throw SchemaError("walk.steps must be an integer");
        m.walk.sites = w["sites"].get<int>();
        m.walk.steps = w["steps"].get<int>();
        if (w.contains("injection_a")) m.walk.injection_a = w["injection_a"].get<int>();
        if (w.contains("injection_b")) m.walk.injection_b = w["injection_b"].get<int>();
        if (w.contains("embed_dim")) m.walk.embed_dim = w["embed_dim"].get<int>();
        else m.walk.embed_dim = std::max(20, m.walk.sites);
        if (w.contains("edge_leak_threshold"))
            m.walk.edge_leak_threshold = w["edge_leak_threshold"].get<double>();
        if (w.contains("first_layer_parity")) {
            const std::string p = w["first_layer_parity"].get<std::string>();
            if (p == "FullPairs") m.walk.first_layer_parity = LayerParity::FullPairs;
            else if (p == "OffsetPairs") m.walk.first_layer_parity = LayerParity::OffsetPairs;
            else throw SchemaError("walk.first_layer_parity must be FullPairs|OffsetPairs");
        }
        if (w.contains("phase_arm")) {
            const std::string p = w["phase_arm"].get<std::string>();
            if (p == "Upper") m.walk.phase_arm = PhaseArm::Upper;
            else if (p == "Lower") m.walk.phase_arm = PhaseArm::Lower;
            else throw SchemaError("walk.phase_arm must be Upper|Lower");
        }
        m.walk.validate();
    }
    if (!doc.contains("noise")) throw SchemaError("manifest is missing the \"noise\" section");
    {
        const json& n = doc["noise"];
        reject_unknown_keys(n, "noise", {"kind", "preset", "interval", "sorted"});
        const std::string kind = n.value("kind", std::string("None"));
        if (kind == "None") {
            m.noise = NoiseSpec::none();
        } else if (kind == "Dynamic") {
            const bool sorted = n.value("sorted", false);
            if (n.contains("preset") && n.contains("interval"))
                throw SchemaError("noise.preset and noise.interval are mutually exclusive");
            if (n.contains("preset")) {
                const std::string preset = n["preset"].get<std::string>();
                if (preset == "Weak") m.noise = NoiseSpec::weak(sorted);
                else if (preset == "Strong") m.noise = NoiseSpec::strong(sorted);
                else throw SchemaError("noise.preset must be Weak|Strong");
            } else if (n.contains("interval")) {
                const json& iv = n["interval"];
                if (!iv.is_array() || iv.size() != 2)
                    throw SchemaError("noise.interval must be [p_min, p_max]");
                m.noise = NoiseSpec{NoiseKind::Dynamic, iv[0].get<double>(),
                                    iv[1].get<double>(), sorted};
                m.noise.validate();
            } else {
                throw SchemaError("dynamic noise needs noise.preset or noise.interval");
            }
        } else {
            throw SchemaError("noise.kind must be None|Dynamic");
        }
    }
    if (doc.contains("ensemble")) {
        const json& e = doc["ensemble"];
        reject_unknown_keys(e, "ensemble", {"configurations", "seed"});
        if (e.contains("configurations")) m.configurations = e["configurations"].get<int>();
        if (m.configurations < 1) throw SchemaError("ensemble.configurations must be >= 1");
        if (e.contains("seed")) m.seed = e["seed"].get<std::uint64_t>();
    }
    if (doc.contains("output")) {
        const json& o = doc["output"];
        reject_unknown_keys(o, "output", {"directory", "formats"});
        if (o.contains("directory")) m.output_directory = o["directory"].get<std::string>();
        if (o.contains("formats")) {
            m.formats.clear();
            for (const auto& f : o["formats"]) {
                const std::string name = f.get<std::string>();
                if (name != "csv") throw SchemaError("unsupported output format: " + name);
                m.formats.push_back(name);
            }
        }
    }
    return m;
}

StepDistributions read_distribution_file(const std::string& path, double raw_sum_tolerance) {
    std::ifstream in = open_in(path);
    std::string line;
    if (!std::getline(in, line))
        throw SchemaError(path + ": empty file");
    const std::vector<std::string> header = split_csv(line);
    if (header.size() < 2 || header[0] != "step")
        throw SchemaError(path + ":1: expected header \"step,p1,...,pK\"");
    const std::size_t cols = header.size() - 1;

    StepDistributions out;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const std::vector<std::string> cells = split_csv(line);
        if (cells.size() != header.size())
            throw SchemaError(path + ":" + std::to_string(lineno) +
                              ": column count differs from header");
        const std::string where = path + ":" + std::to_string(lineno);
        out.steps.push_back(static_cast<int>(parse_double(cells[0], where)));
        std::vector<double> row(cols);
        double sum = 0.0;
        for (std::size_t j = 0; j < cols; ++j) {
            row[j] = parse_double(cells[j + 1], where);
            if (row[j] < 0.0)
                throw SchemaError(where + ": negative probability");
            sum += row[j];
        }
        if (std::abs(sum - 1.0) > std::max(raw_sum_tolerance, 1e-9))
            throw SchemaError(where + ": row sum " + fmt(sum) +
                              " deviates from 1 beyond tolerance");
        for (double& p : row) p /= sum;  // renormalize, mirroring the experiment
        out.rows.push_back(std::move(row));
    }
    return out;
}

void write_distribution_file(const std::string& path, const StepDistributions& data) {
    std::ofstream out = open_out(path);
    out << "step";
    const std::size_t cols = data.rows.empty() ? 0 : data.rows.front().size();
    for (std::size_t j = 1; j <= cols; ++j) out << ",p" << j;
    out << "\n";
    for (std::size_t i = 0; i < data.rows.size(); ++i) {
        out << data.steps[i];
        for (double p : data.rows[i]) out << ',' << fmt(p);
        out << "\n";
    }
    if (!out) throw IoError("write failed: " + path);
}

void write_variance_file(const std::string& path, const VarianceFile& data) {
    std::ofstream out = open_out(path);
    out << "step,variance,mean_position\n";
    for (std::size_t i = 0; i < data.series.values.size(); ++i) {
        out << data.steps[i] << ',' << fmt(data.series.values[i]) << ','
            << fmt(data.mean_position.empty() ? 0.0 : data.mean_position[i]) << "\n";
    }
    if (!out) throw IoError("write failed: " + path);
}

VarianceFile read_variance_file(const std::string& path) {
    std::ifstream in = open_in(path);
    std::string line;
    if (!std::getline(in, line)) throw SchemaError(path + ": empty file");
    const std::vector<std::string> header = split_csv(line);
    std::size_t var_col = header.size();
    std::size_t mean_col = header.size();
    for (std::size_t j = 0; j < header.size(); ++j) {
        if (header[j] == "variance" || header[j] == "central_variance") var_col = j;
        if (header[j] == "mean_position") mean_col = j;
    }
    if (header.empty() || header[0] != "step" || var_col == header.size())
        throw SchemaError(path + ":1: expected a \"step\" and a "
                          "\"variance\"/\"central_variance\" column");
    VarianceFile out;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const std::vector<std::string> cells = split_csv(line);
        if (cells.size() != header.size())
            throw SchemaError(path + ":" + std::to_string(lineno) +
                              ": column count differs from header");
        const std::string where = path + ":" + std::to_string(lineno);
        out.steps.push_back(static_cast<int>(parse_double(cells[0], where)));
        out.series.values.push_back(parse_double(cells[var_col], where));
        if (mean_col < header.size())
            out.mean_position.push_back(parse_double(cells[mean_col], where));
    }
    return out;
}

void write_unitary_file(const std::string& path, const ComplexMatrix& u) {
    std::ofstream out = open_out(path);
    char buf[96];
    for (std::size_t i = 0; i < u.size(); ++i) {
        for (std::size_t j = 0; j < u.size(); ++j) {
            const cplx v = u(i, j);
            std::snprintf(buf, sizeof(buf), "%s%.15g%+.15gi", j ? " " : "",
                          v.real(), v.imag());
            out << buf;
        }
        out << "\n";
    }
    if (!out) throw IoError("write failed: " + path);
}

ComplexMatrix read_unitary_file(const std::string& path) {
    std::ifstream in = open_in(path);
    std::vector<std::vector<cplx>> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<cplx> row;
        std::istringstream ls(line);
        std::string tok;
        while (ls >> tok) {
            // "re+imi" / "re-imi": split at the sign that starts the
            // imaginary part (not an exponent sign, not the leading sign).
            if (tok.empty() || tok.back() != 'i')
                throw SchemaError(path + ":" + std::to_string(lineno) +
                                  ": malformed entry \"" + tok + "\"");
            tok.pop_back();
            std::size_t split = std::string::npos;
            for (std::size_t k = tok.size(); k-- > 1;) {
                if ((tok[k] == '+' || tok[k] == '-') &&
                    tok[k - 1] != 'e' && tok[k - 1] != 'E') {
                    split = k;
                    break;
                }
            }
            if (split == std::string::npos)
                throw SchemaError(path + ":" + std::to_string(lineno) +
                                  ": malformed entry");
            const std::string where = path + ":" + std::to_string(lineno);
            row.emplace_back(parse_double(tok.substr(0, split), where),
                             parse_double(tok.substr(split), where));
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw SchemaError(path + ": empty unitary file");
    ComplexMatrix u(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != rows.size())
            throw SchemaError(path + ": matrix is not square");
        for (std::size_t j = 0; j < rows.size(); ++j) u(i, j) = rows[i][j];
    }
    return u;
}

void cmd_simulate(const RunManifest& manifest, const CommandOptions& opts) {
    if (!opts.fixture && manifest.noise.kind == NoiseKind::Dynamic &&
        manifest.configurations != 1)
        throw SchemaError("simulate runs a single configuration; use the ensemble "
                          "command or set ensemble.configurations to 1");
    const SingleRun run = run_single(manifest, opts);

    StepDistributions dists;
    for (const Distribution& d : run.averaged) {
        dists.steps.push_back(d.step);
        dists.rows.push_back(d.probabilities);
    }
    write_distribution_file(out_path(manifest, opts, "distributions.csv"), dists);
    write_variance_file(out_path(manifest, opts, "variance.csv"), run.variance);
    write_schedule_file(out_path(manifest, opts, "schedule.txt"), run.schedule);
}

void cmd_ensemble(const RunManifest& manifest, const CommandOptions& opts) {
    if (manifest.noise.kind != NoiseKind::Dynamic)
        throw SchemaError("ensemble requires noise.kind = Dynamic");
    EnsembleSpec spec;
    spec.walk = manifest.walk;
    spec.noise = manifest.noise;
    spec.configurations = manifest.configurations;
    spec.seed = opts.seed.value_or(manifest.seed);
    const EnsembleResult res = run_ensemble(spec);

    StepDistributions dists;
    for (const Distribution& d : res.averaged) {
        dists.steps.push_back(d.step);
        dists.rows.push_back(d.probabilities);
    }
    write_distribution_file(out_path(manifest, opts, "avg_distributions.csv"), dists);

    {
        std::ofstream out = open_out(out_path(manifest, opts, "variance_bands.csv"));
        out << "step,central_variance,mean_of_variances,std_band\n";
        for (std::size_t n = 0; n < res.central_variance.values.size(); ++n)
            out << n << ',' << fmt(res.central_variance.values[n]) << ','
                << fmt(res.mean_of_variances.values[n]) << ','
                << fmt(res.std_band[n]) << "\n";
        if (!out) throw IoError("write failed: variance_bands.csv");
    }
    {
        std::ofstream out = open_out(out_path(manifest, opts, "perconfig_variance.csv"));
        out << "config,step,variance\n";
        for (std::size_t r = 0; r < res.per_config_variance.size(); ++r)
            for (std::size_t n = 0; n < res.per_config_variance[r].size(); ++n)
                out << (r + 1) << ',' << n << ','
                    << fmt(res.per_config_variance[r][n]) << "\n";
        if (!out) throw IoError("write failed: perconfig_variance.csv");
    }
}

void cmd_peaks(const std::string& variance_file, const CommandOptions& opts) {
    const VarianceFile vf = read_variance_file(variance_file);
    PeakFit peaks = find_peaks(vf.series);
    // Series indices are positions in the file; map them back to step labels.
    for (int& s : peaks.peak_steps) s = vf.steps[static_cast<std::size_t>(s)];

    RunManifest dummy;  // peaks has no manifest; reuse the output-path helper
    dummy.output_directory = opts.out_dir.value_or(".");
    {
        std::ofstream out = open_out(out_path(dummy, opts, "peaks.csv"));
        out << "order,step\n";
        for (std::size_t i = 0; i < peaks.peak_steps.size(); ++i)
            out << peaks.peak_orders[i] << ',' << peaks.peak_steps[i] << "\n";
        if (!out) throw IoError("write failed: peaks.csv");
    }
    if (peaks.peak_steps.size() >= 2) {
        const PeakFit fit = fit_peaks_linear(peaks);
        std::ofstream out = open_out(out_path(dummy, opts, "peaks_fit.csv"));
        out << "slope,intercept,residual_norm\n";
        out << fmt(fit.slope) << ',' << fmt(fit.intercept) << ','
            << fmt(fit.residual_norm) << "\n";
        if (!out) throw IoError("write failed: peaks_fit.csv");
    } else {
        std::cerr << "warning: fewer than 2 peaks; no linear fit emitted\n";
    }
}

void cmd_compare(const std::string& measured_file, const std::string& simulated_file,
                 const CommandOptions& opts) {
    const StepDistributions measured = read_distribution_file(measured_file);
    const StepDistributions simulated = read_distribution_file(simulated_file);
    if (!measured.rows.empty() && !simulated.rows.empty() &&
        measured.rows.front().size() != simulated.rows.front().size())
        throw SchemaError("column-count mismatch between measured and simulated files");

    std::map<int, std::size_t> sim_index;
    for (std::size_t i = 0; i < simulated.steps.size(); ++i)
        sim_index[simulated.steps[i]] = i;

    RunManifest dummy;
    dummy.output_directory = opts.out_dir.value_or(".");
    std::ofstream out = open_out(out_path(dummy, opts, "tvd_per_step.csv"));
    out << "step,tvd\n";
    double worst = 0.0;
    std::size_t common = 0;
    for (std::size_t i = 0; i < measured.steps.size(); ++i) {
        const auto it = sim_index.find(measured.steps[i]);
        if (it == sim_index.end()) continue;
        Distribution p{measured.rows[i], measured.steps[i]};
        Distribution q{simulated.rows[it->second], measured.steps[i]};
        const double d = tvd(p, q);
        out << measured.steps[i] << ',' << fmt(d) << "\n";
        worst = std::max(worst, d);
        ++common;
    }
    if (!out) throw IoError("write failed: tvd_per_step.csv");
    if (common == 0)
        throw SchemaError("no common steps between measured and simulated files");
    std::cout << "max_tvd," << fmt(worst) << "\n";
}

void cmd_unitary(const RunManifest& manifest, const CommandOptions& opts) {
    const PhaseSchedule schedule = resolve_schedule(manifest, opts);
    const ComplexMatrix u = compose_total_unitary(manifest.walk, schedule.phases);
    write_unitary_file(out_path(manifest, opts, "total_unitary.txt"), u);
}

void cmd_phases(const RunManifest& manifest, const CommandOptions& opts) {
    const PhaseSchedule schedule = resolve_schedule(manifest, opts);
    write_schedule_file(out_path(manifest, opts, "schedule.txt"), schedule);
}

}  // namespace qwalk
