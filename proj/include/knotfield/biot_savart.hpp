#pragma once

#include "knotfield/lattice_knot.hpp"
#include "knotfield/quadrature.hpp"
#include "knotfield/vec3.hpp"

#include <vector>

// Magnetic field of steady currents on axis-aligned straight segments, Gaussian
// units with k = I/c factored out: an infinite wire gives |B| = 2k/r.

namespace knotfield {

using FieldVector = Vec3;

inline constexpr double kDefaultExclusionRadius = 1e-6;

/// Local geometry of a point relative to a segment.
struct SegmentFieldFrame {
    Vec3 axis;             // unit vector along the current
    Vec3 offset;           // rho: component of P - start perpendicular to the axis
    double distance{0.0};  // |rho|
    double cos_theta1{0.0};
    double cos_theta2{0.0};
    Vec3 azimuth;          // axis x rho / |rho|; zero when rho = 0
};

SegmentFieldFrame segment_frame(const Segment& seg, const Vec3& p);

/// Euclidean distance from p to the closed segment.
double distance_to_segment(const Segment& seg, const Vec3& p);

/// Closed-form field of one segment: k (cos th1 + cos th2) / r * phi_hat.
/// Throws OnConductorError when p is within exclusion of the segment.
FieldVector segment_field(const Segment& seg, const Vec3& p, double k,
                          double exclusion = kDefaultExclusionRadius);

/// Direct adaptive quadrature of k dl x (P - l) / |P - l|^3 along the segment.
/// Independent of the closed form; used as the oracle.
FieldVector segment_field_quadrature(const Segment& seg, const Vec3& p, double k, double tol,
                                     double exclusion = kDefaultExclusionRadius);

/// Direction cosines phi_hat . e_i. Throws std::domain_error when p is on the
/// segment's line (azimuth undefined).
Vec3 gamma_weights(const Segment& seg, const Vec3& p);

/// Field evaluator for one knot. Holds the segment list; const and thread-safe.
class KnotField {
public:
    explicit KnotField(const LatticeKnot& knot, double exclusion = kDefaultExclusionRadius);

    const std::vector<Segment>& segments() const { return segments_; }
    double prefactor() const { return prefactor_; }
    double exclusion() const { return exclusion_; }

    /// Sum of segment fields in α order. Throws OnConductorError naming α.
    FieldVector at(const Vec3& p) const;
    /// Minimum distance from p to the circuit.
    double clearance(const Vec3& p) const;
    /// Per-segment contributions B_α in α order.
    std::vector<FieldVector> contributions(const Vec3& p) const;

private:
    std::vector<Segment> segments_;
    double prefactor_;
    double exclusion_;
};

FieldVector total_field(const LatticeKnot& knot, const Vec3& p,
                        double exclusion = kDefaultExclusionRadius);

}  // namespace knotfield
