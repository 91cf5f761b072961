#include "qsphere/run.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "qsphere/atlas.hpp"
#include "qsphere/averaged.hpp"
#include "qsphere/dynamics.hpp"
#include "qsphere/errors.hpp"
#include "qsphere/io.hpp"
#include "qsphere/portrait.hpp"
#include "qsphere/stationary.hpp"
#include "qsphere/validation.hpp"

namespace qsphere {

using nlohmann::json;

std::uint64_t SplitMix64::next() {
    std::uint64_t z = (s += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double SplitMix64::uniform() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

ParticleState random_surface_state(SplitMix64& rng, const SurfaceParams& p) {
    auto draw = [&]() {
        return Vec3{2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0,
                    2.0 * rng.uniform() - 1.0};
    };
    for (;;) {
        Vec3 xd = draw();
        const double nx = norm(xd);
        if (nx < 0.2 || nx > 1.0) continue;
        Vec3 vd = draw();
        const double nv = norm(vd);
        if (nv < 0.2 || nv > 1.0) continue;
        // reject nearly radial throws: the tangential part carries all the motion
        const Vec3 xhat = xd / nx;
        if (norm(vd - xhat * dot(vd, xhat)) < 0.2 * nv) continue;
        const double speed = 0.5 + rng.uniform();
        ParticleState st = make_state(xd, vd * (speed / nv), p);
        if (norm(angular_momentum(st)) < 0.3 * speed) continue;
        return st;
    }
}

namespace {

std::string g3(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

json jvec(const Vec3& v) { return json::array({v[0], v[1], v[2]}); }

void append_row(std::string& out, const double* vals, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        if (i) out += ',';
        out += fmt_double(vals[i]);
    }
    out += '\n';
}

json inventory_json(const FixedPointInventory& inv) {
    json verts = json::array();
    for (std::size_t i = 0; i < inv.points.size(); ++i) {
        const FixedPoint& fp = inv.points[i];
        verts.push_back({{"id", i},
                         {"L0", jvec(fp.L0)},
                         {"family", to_string(fp.family)},
                         {"stability", to_string(fp.stability)},
                         {"eigenvalues",
                          json::array({json::array({fp.eigenvalues[0].real(), fp.eigenvalues[0].imag()}),
                                       json::array({fp.eigenvalues[1].real(), fp.eigenvalues[1].imag()})})},
                         {"energy", fp.energy}});
    }
    return verts;
}

std::string inventory_csv(const FixedPointInventory& inv) {
    std::string out = "L1,L2,L3,family,stability,re1,im1,re2,im2,energy\n";
    for (const FixedPoint& fp : inv.points) {
        double head[3] = {fp.L0[0], fp.L0[1], fp.L0[2]};
        for (double h : head) {
            out += fmt_double(h);
            out += ',';
        }
        out += to_string(fp.family);
        out += ',';
        out += to_string(fp.stability);
        double tail[5] = {fp.eigenvalues[0].real(), fp.eigenvalues[0].imag(),
                          fp.eigenvalues[1].real(), fp.eigenvalues[1].imag(), fp.energy};
        for (double v : tail) {
            out += ',';
            out += fmt_double(v);
        }
        out += '\n';
    }
    return out;
}

struct Counts {
    int centers = 0, saddles = 0, degen = 0;
};

Counts count_points(const FixedPointInventory& inv) {
    Counts c;
    for (const FixedPoint& fp : inv.points) {
        if (fp.stability == Stability::center) ++c.centers;
        else if (fp.stability == Stability::saddle) ++c.saddles;
        else ++c.degen;
    }
    return c;
}

std::string count_phrase(int centers, int saddles) {
    std::string s = std::to_string(centers);
    s += centers == 1 ? " center, " : " centers, ";
    s += std::to_string(saddles);
    s += saddles == 1 ? " saddle" : " saddles";
    return s;
}

std::string run_geodesic(const RunConfig& cfg, const std::string& stem, RunResult& res) {
    SurfaceParams p{cfg.eps};
    ParticleState st0 = make_state(cfg.x0, cfg.v0, p, cfg.integrator);
    Trajectory traj = integrate_geodesic(st0, p, cfg.t_end, cfg.integrator);

    std::string csv = "t,x1,x2,x3,v1,v2,v3,L1,L2,L3,phi,energy\n";
    for (const TrajectorySample& s : traj.samples) {
        const Vec3 L = angular_momentum(s.state);
        double row[12] = {s.t,
                          s.state.x[0], s.state.x[1], s.state.x[2],
                          s.state.v[0], s.state.v[1], s.state.v[2],
                          L[0], L[1], L[2],
                          surface_value(s.state.x, p),
                          dot(s.state.v, s.state.v)};
        append_row(csv, row, 12);
    }
    write_file_atomic(stem + ".csv", csv);
    res.files.push_back(stem + ".csv");

    json j{{"command", "geodesic"},
           {"eps", jvec(cfg.eps)},
           {"t_end", cfg.t_end},
           {"x0", jvec(st0.x)},
           {"v0", jvec(st0.v)},
           {"rows", traj.samples.size()},
           {"steps_accepted", traj.stats.accepted},
           {"steps_rejected", traj.stats.rejected},
           {"rhs_evals", traj.stats.rhs_evals},
           {"projections", traj.projections},
           {"max_abs_phi", traj.max_abs_phi},
           {"max_energy_drift", traj.max_energy_drift}};
    write_file_atomic(stem + ".json", j.dump(2) + "\n");
    res.files.push_back(stem + ".json");

    return "geodesic: t = " + g3(cfg.t_end) + " in " + std::to_string(traj.stats.accepted) +
           " steps, max |phi| = " + g3(traj.max_abs_phi) +
           ", energy drift = " + g3(traj.max_energy_drift);
}

std::string run_averaged(const RunConfig& cfg, const std::string& stem, RunResult& res) {
    SurfaceParams p{cfg.eps};
    ReducedTrajectory traj = integrate_averaged(cfg.L0, p, cfg.t_end, cfg.integrator);

    std::string csv = "t,L1,L2,L3,H,L2norm\n";
    for (const ReducedSample& s : traj.samples) {
        double row[6] = {s.t, s.L[0], s.L[1], s.L[2], hamiltonian(s.L, p), norm(s.L)};
        append_row(csv, row, 6);
    }
    write_file_atomic(stem + ".csv", csv);
    res.files.push_back(stem + ".csv");

    json j{{"command", "averaged"},
           {"eps", jvec(cfg.eps)},
           {"L0", jvec(cfg.L0)},
           {"t_end", cfg.t_end},
           {"rows", traj.samples.size()},
           {"steps_accepted", traj.stats.accepted},
           {"steps_rejected", traj.stats.rejected},
           {"rhs_evals", traj.stats.rhs_evals},
           {"max_h_drift", traj.max_h_drift},
           {"max_l2_drift", traj.max_l2_drift}};
    write_file_atomic(stem + ".json", j.dump(2) + "\n");
    res.files.push_back(stem + ".json");

    return "averaged: t = " + g3(cfg.t_end) + " in " + std::to_string(traj.stats.accepted) +
           " steps, H drift = " + g3(traj.max_h_drift) +
           ", |L|^2 drift = " + g3(traj.max_l2_drift);
}

std::string run_fixed_points(const RunConfig& cfg, const std::string& stem, RunResult& res) {
    FixedPointInventory inv = enumerate_fixed_points(cfg.eps, cfg.radius, cfg.stationary);

    write_file_atomic(stem + ".csv", inventory_csv(inv));
    res.files.push_back(stem + ".csv");

    json j{{"command", "fixed-points"},
           {"eps", jvec(inv.eps)},
           {"radius", inv.radius},
           {"degenerate_parameters", inv.degenerate_parameters},
           {"notes", inv.notes},
           {"points", inventory_json(inv)}};
    write_file_atomic(stem + ".json", j.dump(2) + "\n");
    res.files.push_back(stem + ".json");

    Counts c = count_points(inv);
    std::string line = "fixed points: " + std::to_string(inv.points.size()) +
                       " on the sphere (" + count_phrase(c.centers, c.saddles);
    if (c.degen) line += ", " + std::to_string(c.degen) + " degenerate";
    line += ")";
    if (!c.degen) line += ", index " + std::to_string(euler_index(inv));
    return line;
}

std::string run_portrait(const RunConfig& cfg, const std::string& stem, RunResult& res) {
    PhaseGraph g = compute_portrait(cfg.eps, cfg.radius, cfg.trace, cfg.integrator,
                                    cfg.stationary);

    // the graph census and the closed-form parameter classification must
    // agree away from region boundaries
    TypeClass tc = classify_epsilon(cfg.eps, cfg.atlas);
    const bool tc_definite = !tc.near_boundary && tc.label != "Boundary" &&
                             tc.label != "Degenerate";
    if (tc_definite && g.type != tc.label)
        throw InconsistencyError("portrait type " + g.type +
                                 " contradicts the parameter-space class " + tc.label);

    json edges = json::array();
    for (std::size_t k = 0; k < g.edges.size(); ++k) {
        const Separatrix& e = g.edges[k];
        std::vector<Vec3> line = resample_polyline(e.polyline, cfg.trace.samples_per_edge);
        json pts = json::array();
        for (const Vec3& q : line) pts.push_back(jvec(q));
        edges.push_back({{"source", e.source},
                         {"sink", e.sink},
                         {"saddle", e.saddle},
                         {"branch", to_string(e.branch)},
                         {"captured", e.captured},
                         {"max_h_deviation", e.max_h_deviation},
                         {"trace_time", e.trace_time},
                         {"polyline", pts}});
        if (cfg.edge_csv) {
            std::string csv = "L1,L2,L3\n";
            for (const Vec3& q : line) {
                double row[3] = {q[0], q[1], q[2]};
                append_row(csv, row, 3);
            }
            std::string path = stem + "_edge" + std::to_string(k) + ".csv";
            write_file_atomic(path, csv);
            res.files.push_back(path);
        }
    }

    json j{{"command", "portrait"},
           {"eps", jvec(g.inventory.eps)},
           {"radius", g.inventory.radius},
           {"type", g.type},
           {"parameter_class", tc.label},
           {"centers_identified", g.centers_identified},
           {"saddles_identified", g.saddles_identified},
           {"vertices", inventory_json(g.inventory)},
           {"edges", edges}};
    write_file_atomic(stem + ".json", j.dump(2) + "\n");
    res.files.push_back(stem + ".json");

    write_file_atomic(stem + ".csv", inventory_csv(g.inventory));
    res.files.push_back(stem + ".csv");

    std::string label = g.type == "Unclassified" ? g.type : "Type " + g.type;
    return label + " (" + count_phrase(g.centers_identified, g.saddles_identified) +
           " after identification)";
}

std::string run_atlas(const RunConfig& cfg, const std::string& stem, RunResult& res) {
    const SweepConfig& sw = cfg.sweep;
    AtlasGrid grid;
    if (sw.mode == "plane") {
        SweepPlane plane{sw.fixed_axis, sw.fixed_value, sw.p1_range, sw.p2_range};
        grid = sweep_plane(plane, sw.resolution[0], sw.resolution[1], cfg.atlas);
    } else {
        grid = sweep_sphere(SweepSphere{sw.sphere_radius}, sw.resolution[0], sw.resolution[1],
                            cfg.atlas);
    }

    std::string csv = "p1,p2,label\n";
    for (const AtlasNode& n : grid.nodes) {
        csv += fmt_double(n.p1);
        csv += ',';
        csv += fmt_double(n.p2);
        csv += ',';
        csv += n.cls.label;
        csv += '\n';
    }
    write_file_atomic(stem + ".csv", csv);
    res.files.push_back(stem + ".csv");

    json counts = json::object();
    for (const auto& [label, n] : grid.region_counts) counts[label] = n;
    json j{{"command", "atlas"},
           {"mode", sw.mode},
           {"n1", grid.n1},
           {"n2", grid.n2},
           {"region_counts", counts},
           {"boundary_brackets", grid.boundary_brackets.size()}};
    if (sw.mode == "plane") {
        j["fixed_axis"] = sw.fixed_axis;
        j["fixed_value"] = sw.fixed_value;
        j["p1_range"] = {sw.p1_range[0], sw.p1_range[1]};
        j["p2_range"] = {sw.p2_range[0], sw.p2_range[1]};
    } else {
        j["sphere_radius"] = sw.sphere_radius;
    }
    write_file_atomic(stem + ".json", j.dump(2) + "\n");
    res.files.push_back(stem + ".json");

    std::string line = "atlas: " + std::to_string(grid.n1) + "x" + std::to_string(grid.n2) +
                       " " + sw.mode + " sweep,";
    for (const auto& [label, n] : grid.region_counts)
        line += " " + label + "=" + std::to_string(n);
    return line;
}

std::string run_validate(const RunConfig& cfg, const std::string& stem, RunResult& res) {
    SurfaceParams p{cfg.eps};
    std::vector<ParticleState> starts;
    if (cfg.have_state) {
        starts.push_back(make_state(cfg.x0, cfg.v0, p, cfg.integrator));
    } else {
        SplitMix64 rng(cfg.seed);
        for (int k = 0; k < cfg.n_samples; ++k) starts.push_back(random_surface_state(rng, p));
    }

    json samples = json::array();
    double worst_sup = 0.0, worst_ratio = 0.0;
    for (std::size_t k = 0; k < starts.size(); ++k) {
        DeviationReport rep = compare_exact_vs_averaged(starts[k], p, cfg.t_end, cfg.integrator,
                                                        cfg.validation);
        std::string csv = "t,L1_exact,L2_exact,L3_exact,L1_avg,L2_avg,L3_avg\n";
        for (const DeviationRow& r : rep.series) {
            double row[7] = {r.t, r.L_exact[0], r.L_exact[1], r.L_exact[2],
                             r.L_avg[0], r.L_avg[1], r.L_avg[2]};
            append_row(csv, row, 7);
        }
        std::string path = starts.size() == 1 ? stem + ".csv"
                                              : stem + "_s" + std::to_string(k) + ".csv";
        write_file_atomic(path, csv);
        res.files.push_back(path);

        samples.push_back({{"x0", jvec(starts[k].x)},
                           {"v0", jvec(starts[k].v)},
                           {"L0", jvec(angular_momentum(starts[k]))},
                           {"sup_norm", rep.sup_norm},
                           {"rms", rep.rms},
                           {"eps_ratio", rep.eps_ratio},
                           {"max_abs_phi", rep.max_abs_phi},
                           {"max_energy_drift", rep.max_energy_drift},
                           {"rows", rep.series.size()}});
        worst_sup = std::max(worst_sup, rep.sup_norm);
        worst_ratio = std::max(worst_ratio, rep.eps_ratio);
    }

    json j{{"command", "validate"},
           {"eps", jvec(cfg.eps)},
           {"t_end", cfg.t_end},
           {"n_samples", starts.size()},
           {"worst_sup_norm", worst_sup},
           {"worst_eps_ratio", worst_ratio},
           {"samples", samples}};
    write_file_atomic(stem + ".json", j.dump(2) + "\n");
    res.files.push_back(stem + ".json");

    return "validate: sup deviation = " + g3(worst_sup) + " (ratio to eps scale = " +
           g3(worst_ratio) + ") over " + std::to_string(starts.size()) +
           (starts.size() == 1 ? " sample" : " samples");
}

} // namespace

RunResult run(const RunConfig& cfg) {
    check_params(SurfaceParams{cfg.eps});
    std::error_code ec;
    std::filesystem::create_directories(cfg.out_dir, ec);
    if (ec) throw NumericalError("cannot create output directory " + cfg.out_dir);

    const std::string stem =
        cfg.out_dir + "/" + to_string(cfg.command) + "_" + config_hash(cfg);

    RunResult res;
    switch (cfg.command) {
        case Command::geodesic: res.summary = run_geodesic(cfg, stem, res); break;
        case Command::averaged: res.summary = run_averaged(cfg, stem, res); break;
        case Command::fixed_points: res.summary = run_fixed_points(cfg, stem, res); break;
        case Command::portrait: res.summary = run_portrait(cfg, stem, res); break;
        case Command::atlas: res.summary = run_atlas(cfg, stem, res); break;
        case Command::validate: res.summary = run_validate(cfg, stem, res); break;
    }
    return res;
}

} // namespace qsphere
