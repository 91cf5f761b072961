#pragma once

// JSON run configuration: strict parsing (unknown keys are errors),
// canonical serialization for hashing, canned reproduction presets.

#include <array>
#include <cstdint>
#include <string>

#include "qsphere/atlas.hpp"
#include "qsphere/settings.hpp"
#include "qsphere/stationary.hpp"
#include "qsphere/validation.hpp"
#include "qsphere/vec3.hpp"

namespace qsphere {

enum class Command { geodesic, averaged, fixed_points, portrait, atlas, validate };

const char* to_string(Command c);
Command command_from_string(const std::string& s);

struct SweepConfig {
    std::string mode = "plane"; // "plane" or "sphere"
    int fixed_axis = 2;
    double fixed_value = 0.04;
    std::array<double, 2> p1_range{-0.05, 0.05};
    std::array<double, 2> p2_range{-0.05, 0.05};
    std::array<std::size_t, 2> resolution{101, 101};
    double sphere_radius = 0.04;
};

struct RunConfig {
    Command command = Command::portrait;
    Vec3 eps{0.02, 0.03, 0.04};
    double radius = 1.0;
    Vec3 x0, v0;
    bool have_state = false;
    Vec3 L0;
    bool have_L0 = false;
    double t_end = 100.0;
    int n_samples = 1;
    std::uint64_t seed = 20050815;
    std::string out_dir = ".";
    bool edge_csv = false;

    IntegratorSettings integrator;
    TraceSettings trace;
    StationarySettings stationary;
    AtlasSettings atlas;
    ValidationSettings validation;
    SweepConfig sweep;
};

// throws ConfigError naming the offending key/value
RunConfig parse_config(const std::string& json_text);
RunConfig load_config_file(const std::string& path);

// canonical form: every field explicit, keys sorted
std::string serialize_config(const RunConfig& cfg);
std::string config_hash(const RunConfig& cfg);

// canned presets fig3..fig8; throws ConfigError for unknown names
RunConfig reproduce_config(const std::string& fig);

} // namespace qsphere
