#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qwalk {

enum class NoiseKind { None, Dynamic };

struct NoiseSpec {
    NoiseKind kind = NoiseKind::None;
    double p_min = 0.0;  // radians
    double p_max = 0.0;
    bool sorted = false;

    static NoiseSpec none() { return {}; }
    static NoiseSpec weak(bool sorted);     // [-pi/8, pi/8]
    static NoiseSpec strong(bool sorted);   // [-pi, pi]
    static NoiseSpec interval(double p_min, double p_max, bool sorted);

    void validate() const;
};

/// Per-step phases plus provenance. config_index identifies the stream
/// within an ensemble; identical (spec, steps, seed, config_index) inputs
/// reproduce the schedule bit for bit.
struct PhaseSchedule {
    std::vector<double> phases;
    NoiseSpec spec;
    std::uint64_t seed = 0;
    std::uint64_t config_index = 0;
};

/// i.i.d. uniform draws on [p_min, p_max] from a counter-based stream keyed
/// by (seed, config_index); drawn in step order, then sorted ascending when
/// spec.sorted is set.
PhaseSchedule draw_schedule(const NoiseSpec& spec, int steps, std::uint64_t seed,
                            std::uint64_t config_index);

enum class FixtureName { SortedWeak, SortedStrong, UnsortedStrong };

/// The 20-entry experimental phase vectors, bundled verbatim.
PhaseSchedule load_fixture_schedule(FixtureName name);

FixtureName fixture_from_string(const std::string& name);
std::string fixture_to_string(FixtureName name);

/// Schedule file format: one line per step, "n,phi_radians".
void write_schedule_file(const std::string& path, const PhaseSchedule& schedule);
PhaseSchedule read_schedule_file(const std::string& path);

}  // namespace qwalk
