#pragma once

#include "knotfield/vec3.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace knotfield {

struct LatticePoint {
    std::int64_t x{0};
    std::int64_t y{0};
    std::int64_t z{0};

    constexpr std::int64_t operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
    Vec3 to_vec3() const {
        return {static_cast<double>(x), static_cast<double>(y), static_cast<double>(z)};
    }

    friend constexpr bool operator==(const LatticePoint&, const LatticePoint&) = default;
    friend constexpr auto operator<=>(const LatticePoint&, const LatticePoint&) = default;
};

std::ostream& operator<<(std::ostream& os, const LatticePoint& p);

enum class Axis { X = 0, Y = 1, Z = 2 };

constexpr int axis_index(Axis a) { return static_cast<int>(a); }
char axis_name(Axis a);
Vec3 unit_vector(Axis a);

/// One directed, axis-aligned straight piece of a circuit. index is the 1-based
/// position in current-flow order.
class Segment {
public:
    /// Throws InvalidKnotError unless start and end differ in exactly one coordinate.
    Segment(LatticePoint start, LatticePoint end, std::size_t index);

    const LatticePoint& start() const { return start_; }
    const LatticePoint& end() const { return end_; }
    Axis axis() const { return axis_; }
    int direction_sign() const { return sign_; }
    std::size_t index() const { return index_; }

    /// Unit vector along the current.
    Vec3 direction() const { return unit_vector(axis_) * static_cast<double>(sign_); }
    double length() const;
    /// The two fixed coordinates, in axis order, of the line carrying the segment.
    std::array<std::int64_t, 2> transverse() const;
    /// Axial range as (min, max).
    std::array<std::int64_t, 2> axial_range() const;

    friend bool operator==(const Segment&, const Segment&) = default;

private:
    LatticePoint start_;
    LatticePoint end_;
    Axis axis_;
    int sign_;
    std::size_t index_;
};

/// Oriented closed polygon on the cubic lattice. The closing edge from the last
/// vertex back to the first is implicit. Construction never validates; use validate().
class LatticeKnot {
public:
    LatticeKnot() = default;
    LatticeKnot(std::vector<LatticePoint> vertices, std::string name, double prefactor = 1.0);

    const std::vector<LatticePoint>& vertices() const { return vertices_; }
    const std::string& name() const { return name_; }
    /// Current prefactor k = I/c.
    double prefactor() const { return prefactor_; }
    std::size_t size() const { return vertices_.size(); }

    LatticeKnot with_prefactor(double k) const;
    /// Same curve traversed in the opposite direction, starting at the same vertex.
    LatticeKnot reversed() const;

    /// Axis-aligned bounding box as (min corner, max corner).
    std::array<Vec3, 2> bounding_box() const;

    friend bool operator==(const LatticeKnot&, const LatticeKnot&) = default;

private:
    std::vector<LatticePoint> vertices_;
    std::string name_;
    double prefactor_{1.0};
};

enum class ViolationKind {
    TooFewVertices,
    ZeroLengthEdge,
    NotAxisAligned,
    CollinearVertex,
    SelfIntersection,
};

std::string_view violation_name(ViolationKind kind);

struct Violation {
    ViolationKind kind;
    /// 0-based edge indices; edge i joins vertex i to vertex (i+1) mod n.
    std::size_t edge_a{0};
    std::size_t edge_b{0};
    std::string message;

    friend bool operator==(const Violation&, const Violation&) = default;
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool ok() const { return violations.empty(); }
    bool has(ViolationKind kind) const;
    std::string summary() const;

    friend bool operator==(const ValidationReport&, const ValidationReport&) = default;
};

ValidationReport validate(const LatticeKnot& knot);

/// Segments in traversal order starting at vertices()[0], indexed 1..n.
/// Throws InvalidKnotError if an edge is degenerate or not axis-aligned.
std::vector<Segment> segments(const LatticeKnot& knot);

/// Multiplies every coordinate by factor. Throws std::invalid_argument for factor 0.
LatticeKnot refine(const LatticeKnot& knot, unsigned factor);

/// 12-stick trefoil from fiducial (2,2,0), oriented along the current flow.
LatticeKnot canonical_trefoil();
/// 14-stick figure-eight from fiducial (2,2,0), oriented along the current flow.
LatticeKnot canonical_figure_eight();

/// "3_1" or "4_1"; throws std::invalid_argument otherwise.
LatticeKnot canonical_knot(std::string_view label);

/// Removes repeated consecutive vertices and vertices lying strictly inside a
/// straight run, so that every remaining vertex is a true corner.
std::vector<LatticePoint> simplify_corners(std::vector<LatticePoint> cycle);

// Knot text format: one "x y z" integer triple per line, '#' comment lines, blank
// lines ignored, closing edge implicit.
LatticeKnot parse_knot_text(std::string_view text, std::string name = "file");
LatticeKnot read_knot_file(const std::string& path);
std::string format_knot_text(const LatticeKnot& knot, const std::vector<std::string>& header = {});

}  // namespace knotfield
