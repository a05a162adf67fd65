#include "qwalk/noise.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "qwalk/errors.hpp"

namespace qwalk {

namespace {

constexpr std::array<double, 20> kSortedWeak = {
    -0.387, -0.380, -0.368, -0.285, -0.275, -0.270, -0.261, -0.260, -0.244, -0.140,
     0.016,  0.019,  0.117,  0.198,  0.221,  0.242,  0.243,  0.353,  0.374,  0.392};

constexpr std::array<double, 20> kSortedStrong = {
    -3.094, -2.936, -2.850, -2.482, -0.655, -0.610, -0.526, -0.318, -0.158, 0.072,
     0.925,  1.370,  1.388,  1.478,  1.622,  2.242,  2.351,  2.522,  2.694, 2.851};

constexpr std::array<double, 20> kUnsortedStrong = {
    -0.156,  2.983, -2.675,  1.609,  0.636, -1.676,  1.763, -1.572,  1.623, -2.235,
    -1.240, -2.981,  1.767,  0.274, -1.402,  0.850,  2.797,  1.779,  1.332,  2.775};

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Counter-based stream: draw k of stream (seed, config_index). No state is
/// carried between draws, so ensemble members can be evaluated in any order
/// without changing the values.
double stream_uniform01(std::uint64_t seed, std::uint64_t config_index, std::uint64_t k) {
    const std::uint64_t key =
        splitmix64(seed ^ 0x6a09e667f3bcc909ULL) ^ splitmix64(config_index ^ 0xbb67ae8584caa73bULL);
    const std::uint64_t z = splitmix64(key + k * 0x9e3779b97f4a7c15ULL);
    return static_cast<double>(z >> 11) * 0x1.0p-53;
}

}  // namespace

NoiseSpec NoiseSpec::weak(bool sorted) {
    return {NoiseKind::Dynamic, -std::numbers::pi / 8, std::numbers::pi / 8, sorted};
}

NoiseSpec NoiseSpec::strong(bool sorted) {
    return {NoiseKind::Dynamic, -std::numbers::pi, std::numbers::pi, sorted};
}

NoiseSpec NoiseSpec::interval(double p_min, double p_max, bool sorted) {
    NoiseSpec s{NoiseKind::Dynamic, p_min, p_max, sorted};
    s.validate();
    return s;
}

void NoiseSpec::validate() const {
    if (!std::isfinite(p_min) || !std::isfinite(p_max))
        throw SchemaError("noise interval endpoints must be finite");
    if (p_min > p_max)
        throw SchemaError("noise interval is inverted: p_min > p_max");
}

PhaseSchedule draw_schedule(const NoiseSpec& spec, int steps, std::uint64_t seed,
                            std::uint64_t config_index) {
    spec.validate();
    PhaseSchedule out;
    out.spec = spec;
    out.seed = seed;
    out.config_index = config_index;
    if (spec.kind == NoiseKind::None) {
        out.phases.assign(static_cast<std::size_t>(std::max(steps, 0)), 0.0);
        return out;
    }
    if (steps < 1) throw SchemaError("dynamic noise requires steps >= 1");
    out.phases.resize(static_cast<std::size_t>(steps));
    const double width = spec.p_max - spec.p_min;
    for (int n = 0; n < steps; ++n)
        out.phases[static_cast<std::size_t>(n)] =
            spec.p_min + width * stream_uniform01(seed, config_index, static_cast<std::uint64_t>(n));
    if (spec.sorted) std::sort(out.phases.begin(), out.phases.end());
    return out;
}

PhaseSchedule load_fixture_schedule(FixtureName name) {
    PhaseSchedule out;
    switch (name) {
        case FixtureName::SortedWeak:
            out.phases.assign(kSortedWeak.begin(), kSortedWeak.end());
            out.spec = NoiseSpec::weak(true);
            break;
        case FixtureName::SortedStrong:
            out.phases.assign(kSortedStrong.begin(), kSortedStrong.end());
            out.spec = NoiseSpec::strong(true);
            break;
        case FixtureName::UnsortedStrong:
            out.phases.assign(kUnsortedStrong.begin(), kUnsortedStrong.end());
            out.spec = NoiseSpec::strong(false);
            break;
        default:
            throw SchemaError("unknown fixture name");
    }
    return out;
}

FixtureName fixture_from_string(const std::string& name) {
    if (name == "SortedWeak") return FixtureName::SortedWeak;
    if (name == "SortedStrong") return FixtureName::SortedStrong;
    if (name == "UnsortedStrong") return FixtureName::UnsortedStrong;
    throw SchemaError("unknown fixture name: " + name +
                      " (expected SortedWeak|SortedStrong|UnsortedStrong)");
}

std::string fixture_to_string(FixtureName name) {
    switch (name) {
        case FixtureName::SortedWeak: return "SortedWeak";
        case FixtureName::SortedStrong: return "SortedStrong";
        case FixtureName::UnsortedStrong: return "UnsortedStrong";
    }
    throw SchemaError("unknown fixture name");
}

void write_schedule_file(const std::string& path, const PhaseSchedule& schedule) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    char buf[64];
    for (std::size_t n = 0; n < schedule.phases.size(); ++n) {
        std::snprintf(buf, sizeof(buf), "%zu,%.12g\n", n + 1, schedule.phases[n]);
        out << buf;
    }
    if (!out) throw IoError("write failed: " + path);
}

PhaseSchedule read_schedule_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open for reading: " + path);
    PhaseSchedule out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::size_t n = 0;
        char comma = 0;
        double phi = 0.0;
        if (!(ls >> n >> comma >> phi) || comma != ',')
            throw SchemaError(path + ":" + std::to_string(lineno) +
                              ": expected \"n,phi_radians\"");
        if (n != lineno)
            throw SchemaError(path + ":" + std::to_string(lineno) +
                              ": step numbers must be consecutive from 1");
        out.phases.push_back(phi);
    }
    return out;
}

}  // namespace qwalk
