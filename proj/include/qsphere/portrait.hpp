#pragma once

// Separatrix skeleton of the averaged flow on one momentum sphere and the
// portrait type decided by center/saddle counts after antipodal
// identification.

#include <cstddef>
#include <string>
#include <vector>

#include "qsphere/settings.hpp"
#include "qsphere/stationary.hpp"
#include "qsphere/vec3.hpp"

namespace qsphere {

enum class Branch { unstable_plus, unstable_minus, stable_plus, stable_minus };
const char* to_string(Branch b);

struct Separatrix {
    std::size_t saddle = 0; // inventory index the branch was seeded from
    std::size_t source = 0; // flow source vertex
    std::size_t sink = 0;   // flow sink vertex
    bool captured = false;  // false = timed out, sink undefined
    Branch branch = Branch::unstable_plus;
    std::vector<Vec3> polyline; // ordered along increasing flow time
    double max_h_deviation = 0.0;
    double trace_time = 0.0;
};

struct PhaseGraph {
    FixedPointInventory inventory;
    std::vector<Separatrix> edges;
    int centers_identified = 0;
    int saddles_identified = 0;
    std::string type; // "I".."IV" or "Unclassified"
};

// Four branches per saddle, each integrated until captured inside
// capture_radius of an inventory point or until the time budget runs out.
// Stable branches are traced in reversed time and stored flow-ordered.
std::vector<Separatrix> trace_separatrices(const FixedPointInventory& inv,
                                           const TraceSettings& ts = {},
                                           const IntegratorSettings& is = {});

// Assembles edges + identified counts. allow_partial=false turns a
// non-captured branch into a DanglingEdgeError.
PhaseGraph build_graph(const FixedPointInventory& inv, std::vector<Separatrix> edges,
                       bool allow_partial = false);

// (7,6) -> I, (5,4) -> II, (3,2) -> III, (2,1) -> IV, else Unclassified
std::string classify_graph(const PhaseGraph& g);

// full portrait pipeline for one eps
PhaseGraph compute_portrait(const Vec3& eps, double radius = 1.0,
                            const TraceSettings& ts = {}, const IntegratorSettings& is = {},
                            const StationarySettings& st = {});

// polyline resampled to n points at uniform arclength
std::vector<Vec3> resample_polyline(const std::vector<Vec3>& line, std::size_t n);

} // namespace qsphere
