#include "qsphere/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "qsphere/errors.hpp"
#include "qsphere/io.hpp"
#include "qsphere/surface.hpp"

namespace qsphere {

using nlohmann::json;

const char* to_string(Command c) {
    switch (c) {
        case Command::geodesic: return "geodesic";
        case Command::averaged: return "averaged";
        case Command::fixed_points: return "fixed-points";
        case Command::portrait: return "portrait";
        case Command::atlas: return "atlas";
        case Command::validate: return "validate";
    }
    return "?";
}

Command command_from_string(const std::string& s) {
    if (s == "geodesic") return Command::geodesic;
    if (s == "averaged") return Command::averaged;
    if (s == "fixed-points") return Command::fixed_points;
    if (s == "portrait") return Command::portrait;
    if (s == "atlas") return Command::atlas;
    if (s == "validate") return Command::validate;
    throw ConfigError("unknown command '" + s + "'");
}

namespace {

void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                    const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key()))
            throw ConfigError("unknown key '" + it.key() + "' in " + where);
}

double get_num(const json& obj, const char* key, double fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number()) throw ConfigError(std::string("key '") + key + "' must be a number");
    return v.get<double>();
}

Vec3 get_vec3(const json& obj, const char* key, const Vec3& fallback, bool* present = nullptr) {
    if (present) *present = false;
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_array() || v.size() != 3 || !v[0].is_number() || !v[1].is_number() ||
        !v[2].is_number())
        throw ConfigError(std::string("key '") + key + "' must be an array of 3 numbers");
    if (present) *present = true;
    return Vec3{v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
}

void parse_integrator(const json& obj, IntegratorSettings& s) {
    reject_unknown(obj,
                   {"rtol", "atol", "init_step", "min_step", "max_step", "surface_tol",
                    "tangency_tol", "energy_tol", "gradient_floor", "conservation_tol",
                    "max_newton_iters", "newton_tol"},
                   "integrator");
    s.rtol = get_num(obj, "rtol", s.rtol);
    s.atol = get_num(obj, "atol", s.atol);
    s.init_step = get_num(obj, "init_step", s.init_step);
    s.min_step = get_num(obj, "min_step", s.min_step);
    s.max_step = get_num(obj, "max_step", s.max_step);
    s.surface_tol = get_num(obj, "surface_tol", s.surface_tol);
    s.tangency_tol = get_num(obj, "tangency_tol", s.tangency_tol);
    s.energy_tol = get_num(obj, "energy_tol", s.energy_tol);
    s.gradient_floor = get_num(obj, "gradient_floor", s.gradient_floor);
    s.conservation_tol = get_num(obj, "conservation_tol", s.conservation_tol);
    s.max_newton_iters = static_cast<int>(get_num(obj, "max_newton_iters", s.max_newton_iters));
    s.newton_tol = get_num(obj, "newton_tol", s.newton_tol);
    if (s.rtol <= 0.0 || s.atol <= 0.0) throw ConfigError("integrator tolerances must be positive");
    if (s.min_step <= 0.0) throw ConfigError("integrator min_step must be positive");
}

void parse_trace(const json& obj, TraceSettings& s) {
    reject_unknown(obj,
                   {"seed_offset", "capture_radius", "max_trace_time", "samples_per_edge",
                    "allow_degenerate"},
                   "trace");
    s.seed_offset = get_num(obj, "seed_offset", s.seed_offset);
    s.capture_radius = get_num(obj, "capture_radius", s.capture_radius);
    s.max_trace_time = get_num(obj, "max_trace_time", s.max_trace_time);
    s.samples_per_edge =
        static_cast<std::size_t>(get_num(obj, "samples_per_edge", s.samples_per_edge));
    if (obj.contains("allow_degenerate")) {
        if (!obj.at("allow_degenerate").is_boolean())
            throw ConfigError("key 'allow_degenerate' must be a boolean");
        s.allow_degenerate = obj.at("allow_degenerate").get<bool>();
    }
    if (s.seed_offset <= 0.0 || s.capture_radius <= 0.0)
        throw ConfigError("trace offsets must be positive");
    if (s.samples_per_edge < 2) throw ConfigError("samples_per_edge must be at least 2");
}

void parse_sweep(const json& obj, SweepConfig& s) {
    reject_unknown(obj,
                   {"mode", "fixed_axis", "fixed_value", "p1_range", "p2_range", "resolution",
                    "sphere_radius"},
                   "sweep");
    if (obj.contains("mode")) {
        if (!obj.at("mode").is_string()) throw ConfigError("sweep mode must be a string");
        s.mode = obj.at("mode").get<std::string>();
        if (s.mode != "plane" && s.mode != "sphere")
            throw ConfigError("sweep mode must be 'plane' or 'sphere'");
    }
    s.fixed_axis = static_cast<int>(get_num(obj, "fixed_axis", s.fixed_axis));
    if (s.fixed_axis < 0 || s.fixed_axis > 2)
        throw ConfigError("sweep fixed_axis must be 0, 1 or 2");
    s.fixed_value = get_num(obj, "fixed_value", s.fixed_value);
    s.sphere_radius = get_num(obj, "sphere_radius", s.sphere_radius);
    auto get_range = [&](const char* key, std::array<double, 2>& r) {
        if (!obj.contains(key)) return;
        const json& v = obj.at(key);
        if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
            throw ConfigError(std::string("key '") + key + "' must be an array of 2 numbers");
        r = {v[0].get<double>(), v[1].get<double>()};
        if (!(r[0] < r[1])) throw ConfigError(std::string("range '") + key + "' must increase");
    };
    get_range("p1_range", s.p1_range);
    get_range("p2_range", s.p2_range);
    if (obj.contains("resolution")) {
        const json& v = obj.at("resolution");
        if (!v.is_array() || v.size() != 2 || !v[0].is_number_unsigned() ||
            !v[1].is_number_unsigned())
            throw ConfigError("sweep resolution must be an array of 2 positive integers");
        s.resolution = {v[0].get<std::size_t>(), v[1].get<std::size_t>()};
        if (s.resolution[0] < 2 || s.resolution[1] < 2)
            throw ConfigError("sweep resolution must be at least 2x2");
    }
}

} // namespace

RunConfig parse_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!root.is_object()) throw ConfigError("config root must be a JSON object");

    reject_unknown(root,
                   {"command", "eps", "radius", "x0", "v0", "L0", "t_end", "n_samples", "seed",
                    "out_dir", "edge_csv", "integrator", "trace", "stationary", "atlas",
                    "validation", "sweep"},
                   "config");

    RunConfig cfg;
    if (!root.contains("command")) throw ConfigError("config requires a 'command' key");
    if (!root.at("command").is_string()) throw ConfigError("'command' must be a string");
    cfg.command = command_from_string(root.at("command").get<std::string>());

    cfg.eps = get_vec3(root, "eps", cfg.eps);
    cfg.radius = get_num(root, "radius", cfg.radius);
    if (!(cfg.radius > 0.0)) throw ConfigError("radius must be positive");
    bool have_x = false, have_v = false;
    cfg.x0 = get_vec3(root, "x0", cfg.x0, &have_x);
    cfg.v0 = get_vec3(root, "v0", cfg.v0, &have_v);
    if (have_x != have_v) throw ConfigError("x0 and v0 must be given together");
    cfg.have_state = have_x;
    cfg.L0 = get_vec3(root, "L0", cfg.L0, &cfg.have_L0);
    cfg.t_end = get_num(root, "t_end", cfg.t_end);
    if (!(cfg.t_end != 0.0)) throw ConfigError("t_end must be nonzero");
    cfg.n_samples = static_cast<int>(get_num(root, "n_samples", cfg.n_samples));
    if (cfg.n_samples < 1) throw ConfigError("n_samples must be at least 1");
    if (root.contains("seed")) {
        if (!root.at("seed").is_number_unsigned())
            throw ConfigError("'seed' must be a nonnegative integer");
        cfg.seed = root.at("seed").get<std::uint64_t>();
    }
    if (root.contains("out_dir")) {
        if (!root.at("out_dir").is_string()) throw ConfigError("'out_dir' must be a string");
        cfg.out_dir = root.at("out_dir").get<std::string>();
    }
    if (root.contains("edge_csv")) {
        if (!root.at("edge_csv").is_boolean()) throw ConfigError("'edge_csv' must be a boolean");
        cfg.edge_csv = root.at("edge_csv").get<bool>();
    }

    if (root.contains("integrator")) parse_integrator(root.at("integrator"), cfg.integrator);
    if (root.contains("trace")) parse_trace(root.at("trace"), cfg.trace);
    if (root.contains("stationary")) {
        const json& obj = root.at("stationary");
        reject_unknown(obj, {"fp_tol", "degeneracy_tol"}, "stationary");
        cfg.stationary.fp_tol = get_num(obj, "fp_tol", cfg.stationary.fp_tol);
        cfg.stationary.degeneracy_tol =
            get_num(obj, "degeneracy_tol", cfg.stationary.degeneracy_tol);
    }
    if (root.contains("atlas")) {
        const json& obj = root.at("atlas");
        reject_unknown(obj, {"boundary_tol"}, "atlas");
        cfg.atlas.boundary_tol = get_num(obj, "boundary_tol", cfg.atlas.boundary_tol);
    }
    if (root.contains("validation")) {
        const json& obj = root.at("validation");
        reject_unknown(obj, {"frame_floor", "quadrature_n"}, "validation");
        cfg.validation.frame_floor = get_num(obj, "frame_floor", cfg.validation.frame_floor);
        cfg.validation.quadrature_n =
            static_cast<std::size_t>(get_num(obj, "quadrature_n", cfg.validation.quadrature_n));
        if (cfg.validation.quadrature_n < 4)
            throw ConfigError("validation quadrature_n must be at least 4");
    }
    if (root.contains("sweep")) parse_sweep(root.at("sweep"), cfg.sweep);

    SurfaceParams p{cfg.eps};
    check_params(p);

    // per-command requirements
    switch (cfg.command) {
        case Command::geodesic:
        case Command::validate:
            if (!cfg.have_state && cfg.command == Command::geodesic)
                throw ConfigError("geodesic requires x0 and v0");
            break;
        case Command::averaged:
            if (!cfg.have_L0) throw ConfigError("averaged requires L0");
            if (norm(cfg.L0) == 0.0) throw ConfigError("L0 must be nonzero");
            break;
        default:
            break;
    }
    return cfg;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& cfg) {
    json root;
    root["command"] = to_string(cfg.command);
    root["eps"] = {cfg.eps[0], cfg.eps[1], cfg.eps[2]};
    root["radius"] = cfg.radius;
    if (cfg.have_state) {
        root["x0"] = {cfg.x0[0], cfg.x0[1], cfg.x0[2]};
        root["v0"] = {cfg.v0[0], cfg.v0[1], cfg.v0[2]};
    }
    if (cfg.have_L0) root["L0"] = {cfg.L0[0], cfg.L0[1], cfg.L0[2]};
    root["t_end"] = cfg.t_end;
    root["n_samples"] = cfg.n_samples;
    root["seed"] = cfg.seed;
    root["edge_csv"] = cfg.edge_csv;
    root["integrator"] = {{"rtol", cfg.integrator.rtol},
                          {"atol", cfg.integrator.atol},
                          {"init_step", cfg.integrator.init_step},
                          {"min_step", cfg.integrator.min_step},
                          {"max_step", cfg.integrator.max_step},
                          {"surface_tol", cfg.integrator.surface_tol},
                          {"tangency_tol", cfg.integrator.tangency_tol},
                          {"energy_tol", cfg.integrator.energy_tol},
                          {"gradient_floor", cfg.integrator.gradient_floor},
                          {"conservation_tol", cfg.integrator.conservation_tol},
                          {"max_newton_iters", cfg.integrator.max_newton_iters},
                          {"newton_tol", cfg.integrator.newton_tol}};
    root["trace"] = {{"seed_offset", cfg.trace.seed_offset},
                     {"capture_radius", cfg.trace.capture_radius},
                     {"max_trace_time", cfg.trace.max_trace_time},
                     {"samples_per_edge", cfg.trace.samples_per_edge},
                     {"allow_degenerate", cfg.trace.allow_degenerate}};
    root["stationary"] = {{"fp_tol", cfg.stationary.fp_tol},
                          {"degeneracy_tol", cfg.stationary.degeneracy_tol}};
    root["atlas"] = {{"boundary_tol", cfg.atlas.boundary_tol}};
    root["validation"] = {{"frame_floor", cfg.validation.frame_floor},
                          {"quadrature_n", cfg.validation.quadrature_n}};
    root["sweep"] = {{"mode", cfg.sweep.mode},
                     {"fixed_axis", cfg.sweep.fixed_axis},
                     {"fixed_value", cfg.sweep.fixed_value},
                     {"p1_range", {cfg.sweep.p1_range[0], cfg.sweep.p1_range[1]}},
                     {"p2_range", {cfg.sweep.p2_range[0], cfg.sweep.p2_range[1]}},
                     {"resolution", {cfg.sweep.resolution[0], cfg.sweep.resolution[1]}},
                     {"sphere_radius", cfg.sweep.sphere_radius}};
    // out_dir intentionally left out of the canonical form so the same run
    // written elsewhere keeps its identity
    return root.dump(2);
}

std::string config_hash(const RunConfig& cfg) { return fnv1a_hex(serialize_config(cfg)); }

RunConfig reproduce_config(const std::string& fig) {
    RunConfig cfg;
    if (fig == "fig3") {
        cfg.command = Command::portrait;
        cfg.eps = Vec3{0.02, 0.03, 0.04};
    } else if (fig == "fig4") {
        cfg.command = Command::portrait;
        cfg.eps = Vec3{0.01, 0.03, 0.04};
    } else if (fig == "fig5") {
        cfg.command = Command::portrait;
        cfg.eps = Vec3{-0.02, 0.03, 0.04};
    } else if (fig == "fig6") {
        cfg.command = Command::portrait;
        cfg.eps = Vec3{-0.01, 0.0, 0.01};
    } else if (fig == "fig7") {
        cfg.command = Command::atlas;
        cfg.eps = Vec3{0.0, 0.0, 0.04};
        cfg.sweep = SweepConfig{}; // slice eps3 = 0.04, 101x101 over [-0.05, 0.05]^2
    } else if (fig == "fig8") {
        cfg.command = Command::validate;
        cfg.eps = Vec3{0.02, 0.03, 0.04};
        cfg.t_end = 100.0;
        cfg.n_samples = 1;
        cfg.have_state = true;
        cfg.x0 = Vec3{0.3, 0.5, 0.81};
        cfg.v0 = Vec3{-0.7, 0.4, 0.1};
    } else {
        throw ConfigError("unknown reproduction preset '" + fig + "' (use fig3..fig8)");
    }
    return cfg;
}

} // namespace qsphere
