#pragma once

#include "knotfield/biot_savart.hpp"
#include "knotfield/lattice_knot.hpp"
#include "knotfield/vec3.hpp"

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace knotfield {

inline constexpr double kFourPi = 12.566370614359172953850573533118;

/// Oriented closed polyline with real coordinates; the last vertex joins the first.
struct Loop {
    std::vector<Vec3> vertices;
    std::string name;

    /// Throws std::invalid_argument for fewer than 3 vertices or repeated consecutive ones.
    void check() const;
    Loop reversed() const;
    Loop scaled(double factor) const;
    Loop translated(const Vec3& offset) const;
};

/// Axis-aligned rectangle centred at center with unit normal along normal_axis,
/// traversed counter-clockwise about +normal.
Loop rectangle_loop(const Vec3& center, Axis normal_axis, double half_u, double half_v,
                    std::string name = "rectangle");

/// Vertices of a lattice knot as a real polyline.
std::vector<Vec3> knot_polyline(const LatticeKnot& knot);

double segment_segment_distance(const Vec3& a0, const Vec3& a1, const Vec3& b0, const Vec3& b1);

/// Smallest distance between any loop edge and any knot segment.
double loop_clearance(const LatticeKnot& knot, const Loop& loop);

struct HolonomyResult {
    double value{0.0};
    double error_estimate{0.0};
    std::size_t edges_evaluated{0};
    long field_evaluations{0};
    long inferred_linking{0};
    /// |value - 4 pi k inferred_linking|
    double residual{0.0};
};

/// Line integral of B.dl around the loop, adaptive per edge with budget tol/edges.
/// Throws OnConductorError naming the loop edge and the knot segment it touches.
HolonomyResult holonomy(const LatticeKnot& knot, const Loop& loop, double tol,
                        double exclusion = kDefaultExclusionRadius);

struct LinkingEstimate {
    long linking{0};
    /// Gauss double integral divided by 4 pi.
    double raw{0.0};
    double residual{0.0};
};

/// Gauss double integral over loop x knot, evaluated by nested adaptive quadrature
/// and rounded. Throws PrecisionError when the rounding residual reaches 0.25.
LinkingEstimate gauss_linking(const LatticeKnot& knot, const Loop& loop, double tol = 1e-6);

long linking_number(const LatticeKnot& knot, const Loop& loop);

/// One transverse double point of a projection.
struct Crossing {
    std::size_t over_edge{0};
    std::size_t under_edge{0};
    int sign{0};
};

struct ProjectionScan {
    std::vector<Crossing> crossings;
    /// Touching endpoints or collinear overlaps; a generic projection has none.
    std::size_t degeneracies{0};

    int signed_sum() const;
};

/// Crossings of a closed polyline with itself, viewed from +view.
ProjectionScan scan_self_crossings(const std::vector<Vec3>& cycle, const Vec3& view);

/// Crossings between two closed polylines, viewed from +view.
ProjectionScan scan_crossings(const std::vector<Vec3>& a, const std::vector<Vec3>& b,
                              const Vec3& view);

/// Combinatorial linking number: signed crossings where the loop passes over the
/// knot in a generic projection.
long linking_number_by_projection(const LatticeKnot& knot, const Loop& loop);

struct FlatConnectionEntry {
    std::string loop_name;
    HolonomyResult holonomy;
    long linking{0};
    double expected{0.0};
    double residual{0.0};
    bool pass{false};
};

struct FlatConnectionReport {
    std::vector<FlatConnectionEntry> entries;
    bool pass{true};
};

/// Compares each loop's holonomy with 4 pi k Lk from the Gauss oracle. A loop
/// passes when |holonomy - 4 pi k Lk| <= tol * max(1, |holonomy|).
FlatConnectionReport verify_flat_connection(const LatticeKnot& knot, const std::vector<Loop>& loops,
                                            double tol,
                                            double exclusion = kDefaultExclusionRadius);

// Loop text format: one "x y z" real triple per line; same comment rules as knots.
Loop parse_loop_text(std::string_view text, std::string name = "loop");
Loop read_loop_file(const std::string& path);
std::string format_loop_text(const Loop& loop);

}  // namespace knotfield
