#include "qsphere/atlas.hpp"

#include <algorithm>
#include <cmath>

#include "qsphere/errors.hpp"
#include "qsphere/stationary.hpp"

namespace qsphere {

TypeClass classify_epsilon(const Vec3& eps, const AtlasSettings& st) {
    TypeClass tc;
    double scale = std::max({std::fabs(eps[0]), std::fabs(eps[1]), std::fabs(eps[2])});
    if (scale == 0.0) {
        tc.label = "Degenerate";
        return tc;
    }

    const double eps_tol = st.boundary_tol * scale;
    const double q_tol = st.boundary_tol * scale * scale;

    bool zero[3];
    for (int i = 0; i < 3; ++i) zero[i] = std::fabs(eps[i]) <= eps_tol;

    // pairwise products: prod[i] omits eps_i
    double prod[3] = {eps[1] * eps[2], eps[2] * eps[0], eps[0] * eps[1]};
    auto q = q_quantities(eps);
    tc.min_abs_q = std::min({std::fabs(q[0]), std::fabs(q[1]), std::fabs(q[2])});

    for (int i = 0; i < 3; ++i)
        if (zero[i] || std::fabs(prod[i]) <= q_tol || std::fabs(q[i]) <= q_tol)
            tc.near_boundary = true;

    // IV: some eps_i = 0 with the product of the other two <= 0
    for (int i = 0; i < 3; ++i) {
        if (zero[i] && prod[i] <= q_tol) {
            tc.label = "IV";
            return tc;
        }
    }

    // III: one pairwise product positive with the adjacent one <= 0:
    // e2 e3 > 0 & e1 e2 <= 0, or e3 e1 > 0 & e2 e3 <= 0, or e1 e2 > 0 & e3 e1 <= 0
    if ((prod[0] > 0.0 && prod[2] <= 0.0) || (prod[1] > 0.0 && prod[0] <= 0.0) ||
        (prod[2] > 0.0 && prod[1] <= 0.0)) {
        tc.label = "III";
        return tc;
    }

    bool all_nonzero_same_sign =
        !zero[0] && !zero[1] && !zero[2] &&
        ((eps[0] > 0.0 && eps[1] > 0.0 && eps[2] > 0.0) ||
         (eps[0] < 0.0 && eps[1] < 0.0 && eps[2] < 0.0));
    double qmin = std::min({q[0], q[1], q[2]});

    if (all_nonzero_same_sign && qmin <= 0.0) {
        tc.label = "II";
        return tc;
    }
    if (qmin > 0.0) {
        tc.label = "I";
        return tc;
    }
    tc.label = "Boundary";
    return tc;
}

namespace {

AtlasGrid assemble(std::vector<AtlasNode> nodes, std::size_t n1, std::size_t n2) {
    AtlasGrid g;
    g.nodes = std::move(nodes);
    g.n1 = n1;
    g.n2 = n2;
    for (const auto& nd : g.nodes) ++g.region_counts[nd.cls.label];

    auto at = [&](std::size_t i, std::size_t j) -> const AtlasNode& {
        return g.nodes[i * n2 + j];
    };
    for (std::size_t i = 0; i < n1; ++i)
        for (std::size_t j = 0; j < n2; ++j) {
            if (i + 1 < n1 && at(i, j).cls.label != at(i + 1, j).cls.label)
                g.boundary_brackets.push_back({at(i, j).eps, at(i + 1, j).eps});
            if (j + 1 < n2 && at(i, j).cls.label != at(i, j + 1).cls.label)
                g.boundary_brackets.push_back({at(i, j).eps, at(i, j + 1).eps});
        }
    return g;
}

} // namespace

AtlasGrid sweep_plane(const SweepPlane& plane, std::size_t n1, std::size_t n2,
                      const AtlasSettings& st) {
    if (n1 < 2 || n2 < 2) throw ConfigError("sweep resolution must be at least 2x2");
    if (plane.fixed_axis < 0 || plane.fixed_axis > 2)
        throw ConfigError("sweep fixed_axis must be 0, 1 or 2");

    int a1 = (plane.fixed_axis + 1) % 3, a2 = (plane.fixed_axis + 2) % 3;
    std::vector<AtlasNode> nodes;
    nodes.reserve(n1 * n2);
    for (std::size_t i = 0; i < n1; ++i) {
        double p1 = plane.p1_range[0] +
                    (plane.p1_range[1] - plane.p1_range[0]) * static_cast<double>(i) /
                        static_cast<double>(n1 - 1);
        for (std::size_t j = 0; j < n2; ++j) {
            double p2 = plane.p2_range[0] +
                        (plane.p2_range[1] - plane.p2_range[0]) * static_cast<double>(j) /
                            static_cast<double>(n2 - 1);
            AtlasNode nd;
            nd.p1 = p1;
            nd.p2 = p2;
            nd.eps[plane.fixed_axis] = plane.fixed_value;
            nd.eps[a1] = p1;
            nd.eps[a2] = p2;
            nd.cls = classify_epsilon(nd.eps, st);
            nodes.push_back(nd);
        }
    }
    return assemble(std::move(nodes), n1, n2);
}

AtlasGrid sweep_sphere(const SweepSphere& sph, std::size_t n1, std::size_t n2,
                       const AtlasSettings& st) {
    if (n1 < 2 || n2 < 2) throw ConfigError("sweep resolution must be at least 2x2");
    std::vector<AtlasNode> nodes;
    nodes.reserve(n1 * n2);
    for (std::size_t i = 0; i < n1; ++i) {
        double theta = M_PI * static_cast<double>(i) / static_cast<double>(n1 - 1);
        for (std::size_t j = 0; j < n2; ++j) {
            double phi = 2.0 * M_PI * static_cast<double>(j) / static_cast<double>(n2 - 1);
            AtlasNode nd;
            nd.p1 = theta;
            nd.p2 = phi;
            nd.eps = Vec3{sph.radius * std::sin(theta) * std::cos(phi),
                          sph.radius * std::sin(theta) * std::sin(phi),
                          sph.radius * std::cos(theta)};
            nd.cls = classify_epsilon(nd.eps, st);
            nodes.push_back(nd);
        }
    }
    return assemble(std::move(nodes), n1, n2);
}

Vec3 refine_boundary(const Vec3& a, const Vec3& b, int max_iters, const AtlasSettings& st) {
    std::string la = classify_epsilon(a, st).label;
    std::string lb = classify_epsilon(b, st).label;
    if (la == lb) throw ConfigError("refine_boundary endpoints carry the same label");

    Vec3 lo = a, hi = b;
    for (int it = 0; it < max_iters; ++it) {
        Vec3 mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break; // interval at floating point resolution
        std::string lm = classify_epsilon(mid, st).label;
        if (lm == la) lo = mid;
        else if (lm == lb) hi = mid;
        else { // landed on a third label between the regions: shrink toward it
            hi = mid;
            lb = lm;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace qsphere
