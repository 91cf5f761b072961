#include "qsphere/portrait.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "qsphere/averaged.hpp"
#include "qsphere/errors.hpp"

namespace qsphere {

const char* to_string(Branch b) {
    switch (b) {
        case Branch::unstable_plus: return "unstable+";
        case Branch::unstable_minus: return "unstable-";
        case Branch::stable_plus: return "stable+";
        case Branch::stable_minus: return "stable-";
    }
    return "?";
}

namespace {

// distance from point q to segment [a, b], with the clip parameter returned
double segment_distance(const Vec3& a, const Vec3& b, const Vec3& q, double& s_out) {
    Vec3 ab = b - a;
    double ab2 = norm2(ab);
    double s = (ab2 > 0.0) ? dot(q - a, ab) / ab2 : 0.0;
    s = std::min(1.0, std::max(0.0, s));
    s_out = s;
    return norm(q - (a + s * ab));
}

Vec3 saddle_direction(const FixedPoint& fp, double lambda) {
    const auto& m = fp.jac;
    double v1[2] = {m[0][1], lambda - m[0][0]};
    double v2[2] = {lambda - m[1][1], m[1][0]};
    double n1 = std::hypot(v1[0], v1[1]);
    double n2 = std::hypot(v2[0], v2[1]);
    double v[2];
    if (n1 >= n2 && n1 > 0.0) { v[0] = v1[0] / n1; v[1] = v1[1] / n1; }
    else if (n2 > 0.0) { v[0] = v2[0] / n2; v[1] = v2[1] / n2; }
    else { v[0] = 1.0; v[1] = 0.0; }
    return normalized(v[0] * fp.tangent_basis[0] + v[1] * fp.tangent_basis[1]);
}

struct TraceOutcome {
    std::vector<Vec3> line;
    bool captured = false;
    std::size_t hit = 0;
    double max_h_dev = 0.0;
    double time = 0.0;
};

TraceOutcome trace_branch(const FixedPointInventory& inv, const SurfaceParams& p,
                          std::size_t saddle_idx, const Vec3& seed, bool reversed,
                          double budget, const TraceSettings& ts, const IntegratorSettings& is) {
    const double r = inv.radius;
    const double cap = ts.capture_radius * r;
    const double h_ref = hamiltonian(seed, p);

    TraceOutcome out;
    out.line.push_back(seed);

    StateVec<3> y{seed[0], seed[1], seed[2]};
    const double sgn = reversed ? -1.0 : 1.0;
    auto rhs = [&](double, const StateVec<3>& u, StateVec<3>& du) {
        Vec3 f = averaged_rhs(Vec3{u[0], u[1], u[2]}, p);
        du = {sgn * f[0], sgn * f[1], sgn * f[2]};
    };

    bool armed = false;
    Vec3 prev = seed;

    auto on_accept = [&](double t, StateVec<3>& u, double) {
        Vec3 L{u[0], u[1], u[2]};
        L *= r / norm(L);
        u = {L[0], L[1], L[2]};

        if (!armed && norm(L - inv.points[saddle_idx].L0) > 2.0 * cap) armed = true;

        // capture against every inventory point along the step chord, so a
        // long step cannot jump across a capture ball
        for (std::size_t i = 0; i < inv.points.size(); ++i) {
            if (i == saddle_idx && !armed) continue;
            double s = 0.0;
            if (segment_distance(prev, L, inv.points[i].L0, s) <= cap) {
                Vec3 end = prev + s * (L - prev);
                out.line.push_back(end);
                out.max_h_dev = std::max(out.max_h_dev,
                                         std::fabs(hamiltonian(end, p) - h_ref));
                out.captured = true;
                out.hit = i;
                out.time = t;
                return StepAction::stop;
            }
        }

        out.line.push_back(L);
        out.max_h_dev = std::max(out.max_h_dev, std::fabs(hamiltonian(L, p) - h_ref));
        out.time = t;
        prev = L;
        return StepAction::run;
    };

    integrate_adaptive<3>(rhs, y, 0.0, budget, is, on_accept);
    return out;
}

} // namespace

std::vector<Separatrix> trace_separatrices(const FixedPointInventory& inv,
                                           const TraceSettings& ts, const IntegratorSettings& is) {
    SurfaceParams p{inv.eps};
    const double r = inv.radius;
    double scale = std::max({std::fabs(inv.eps[0]), std::fabs(inv.eps[1]), std::fabs(inv.eps[2])});

    if (!ts.allow_degenerate)
        for (const auto& fp : inv.points)
            if (fp.stability == Stability::degenerate)
                throw NumericalError("degenerate fixed point in the inventory, tracing disabled");

    std::vector<Separatrix> edges;
    for (std::size_t idx = 0; idx < inv.points.size(); ++idx) {
        const FixedPoint& fp = inv.points[idx];
        if (fp.stability != Stability::saddle) continue;

        double mu = fp.eigenvalues[0].real(); // positive member of the real pair
        if (mu <= 0.0)
            throw NumericalError("saddle without a positive real eigenvalue");

        double budget = ts.max_trace_time;
        if (budget <= 0.0) {
            budget = 4.0 * (std::log(1.0 / ts.seed_offset) + std::log(1.0 / ts.capture_radius)) / mu;
            if (scale > 0.0) budget = std::max(budget, 50.0 / scale);
        }

        Vec3 dir_u = saddle_direction(fp, fp.eigenvalues[0].real());
        Vec3 dir_s = saddle_direction(fp, fp.eigenvalues[1].real());

        struct Spec { Branch b; Vec3 dir; bool reversed; };
        const Spec specs[4] = {
            {Branch::unstable_plus, dir_u, false},
            {Branch::unstable_minus, -dir_u, false},
            {Branch::stable_plus, dir_s, true},
            {Branch::stable_minus, -dir_s, true},
        };

        for (const auto& sp : specs) {
            Vec3 seed = fp.L0 + (ts.seed_offset * r) * sp.dir;
            seed *= r / norm(seed);
            TraceOutcome oc = trace_branch(inv, p, idx, seed, sp.reversed, budget, ts, is);

            Separatrix e;
            e.saddle = idx;
            e.branch = sp.b;
            e.captured = oc.captured;
            e.max_h_deviation = oc.max_h_dev;
            e.trace_time = oc.time;
            if (sp.reversed) {
                std::reverse(oc.line.begin(), oc.line.end());
                e.source = oc.captured ? oc.hit : idx;
                e.sink = idx;
            } else {
                e.source = idx;
                e.sink = oc.captured ? oc.hit : idx;
            }
            e.polyline = resample_polyline(oc.line, ts.samples_per_edge);
            edges.push_back(std::move(e));
        }
    }
    return edges;
}

PhaseGraph build_graph(const FixedPointInventory& inv, std::vector<Separatrix> edges,
                       bool allow_partial) {
    if (!allow_partial)
        for (const auto& e : edges)
            if (!e.captured)
                throw DanglingEdgeError("separatrix branch timed out before capture");

    PhaseGraph g;
    g.inventory = inv;
    g.edges = std::move(edges);

    SurfaceParams p{inv.eps};
    int centers = 0, saddles = 0;
    for (const auto& fp : inv.points) {
        Stability s = fp.stability;
        if (s == Stability::degenerate)
            s = topological_class(fp.L0, p, inv.radius);
        if (s == Stability::center) ++centers;
        else if (s == Stability::saddle) ++saddles;
    }
    g.centers_identified = centers / 2;
    g.saddles_identified = saddles / 2;
    g.type = classify_graph(g);
    return g;
}

std::string classify_graph(const PhaseGraph& g) {
    int c = g.centers_identified, s = g.saddles_identified;
    if (c == 7 && s == 6) return "I";
    if (c == 5 && s == 4) return "II";
    if (c == 3 && s == 2) return "III";
    if (c == 2 && s == 1) return "IV";
    return "Unclassified";
}

PhaseGraph compute_portrait(const Vec3& eps, double radius, const TraceSettings& ts,
                            const IntegratorSettings& is, const StationarySettings& st) {
    FixedPointInventory inv = enumerate_fixed_points(eps, radius, st);
    auto edges = trace_separatrices(inv, ts, is);
    return build_graph(inv, std::move(edges), false);
}

std::vector<Vec3> resample_polyline(const std::vector<Vec3>& line, std::size_t n) {
    if (line.size() < 2 || n < 2) return line;
    std::vector<double> s(line.size(), 0.0);
    for (std::size_t i = 1; i < line.size(); ++i)
        s[i] = s[i - 1] + norm(line[i] - line[i - 1]);
    double total = s.back();
    if (total == 0.0) return std::vector<Vec3>(n, line.front());

    std::vector<Vec3> out;
    out.reserve(n);
    std::size_t j = 0;
    for (std::size_t k = 0; k < n; ++k) {
        double target = total * static_cast<double>(k) / static_cast<double>(n - 1);
        while (j + 1 < s.size() && s[j + 1] < target) ++j;
        if (j + 1 >= line.size()) { out.push_back(line.back()); continue; }
        double seg = s[j + 1] - s[j];
        double w = (seg > 0.0) ? (target - s[j]) / seg : 0.0;
        out.push_back(line[j] + w * (line[j + 1] - line[j]));
    }
    return out;
}

} // namespace qsphere
