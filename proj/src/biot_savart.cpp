#include "knotfield/biot_savart.hpp"

#include "knotfield/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace knotfield {

namespace {

[[noreturn]] void throw_on_conductor(const Segment& seg, const Vec3& p, double distance) {
    std::ostringstream os;
    os << "point " << p << " lies within " << distance << " of segment " << seg.index() << ' '
       << seg.start() << "->" << seg.end();
    throw OnConductorError(os.str(), seg.index());
}

}  // namespace

SegmentFieldFrame segment_frame(const Segment& seg, const Vec3& p) {
    SegmentFieldFrame f;
    const Vec3 s = seg.start().to_vec3();
    const Vec3 e = seg.end().to_vec3();
    const int ax = axis_index(seg.axis());
    f.axis = seg.direction();
    f.offset = p - s;
    f.offset[ax] = 0.0;
    f.distance = norm(f.offset);
    const double u1 = dot(p - s, f.axis);
    const double u2 = dot(p - e, f.axis);
    const double r1 = norm(p - s);
    const double r2 = norm(p - e);
    f.cos_theta1 = r1 > 0.0 ? u1 / r1 : 0.0;
    f.cos_theta2 = r2 > 0.0 ? -u2 / r2 : 0.0;
    if (f.distance > 0.0) {
        f.azimuth = cross(f.axis, f.offset) / f.distance;
    }
    return f;
}

double distance_to_segment(const Segment& seg, const Vec3& p) {
    const Vec3 s = seg.start().to_vec3();
    const Vec3 d = seg.end().to_vec3() - s;
    const double len2 = dot(d, d);
    const double t = std::clamp(dot(p - s, d) / len2, 0.0, 1.0);
    return norm(p - (s + d * t));
}

FieldVector segment_field(const Segment& seg, const Vec3& p, double k, double exclusion) {
    const double dist = distance_to_segment(seg, p);
    if (dist < exclusion) {
        throw_on_conductor(seg, p, dist);
    }
    const Vec3 s = seg.start().to_vec3();
    const Vec3 e = seg.end().to_vec3();
    const Vec3 u = seg.direction();
    Vec3 rho = p - s;
    rho[axis_index(seg.axis())] = 0.0;
    const double r_sq = dot(rho, rho);
    const double u1 = dot(p - s, u);
    const double u2 = dot(p - e, u);
    const double r1 = std::sqrt(u1 * u1 + r_sq);
    const double r2 = std::sqrt(u2 * u2 + r_sq);

    // g = (cos th1 + cos th2) / r^2. Beyond either end u1, u2 share a sign and the
    // direct sum cancels; the rationalized form vanishes smoothly as rho -> 0.
    double g = 0.0;
    if ((u1 > 0.0 && u2 > 0.0) || (u1 < 0.0 && u2 < 0.0)) {
        g = (u1 - u2) * (u1 + u2) / (r1 * r2 * (u1 * r2 + u2 * r1));
    } else {
        g = (u1 / r1 - u2 / r2) / r_sq;
    }
    return cross(u, rho) * (k * g);
}

FieldVector segment_field_quadrature(const Segment& seg, const Vec3& p, double k, double tol,
                                     double exclusion) {
    const double dist = distance_to_segment(seg, p);
    if (dist < exclusion) {
        throw_on_conductor(seg, p, dist);
    }
    const Vec3 s = seg.start().to_vec3();
    const Vec3 u = seg.direction();
    auto integrand = [&](double t) {
        const Vec3 r = p - (s + u * t);
        const double d = norm(r);
        return cross(u, r) * (k / (d * d * d));
    };
    QuadratureOptions opt;
    opt.abs_tol = tol;
    return integrate_adaptive<Vec3>(integrand, 0.0, seg.length(), opt).value;
}

Vec3 gamma_weights(const Segment& seg, const Vec3& p) {
    const SegmentFieldFrame f = segment_frame(seg, p);
    if (f.distance == 0.0) {
        throw std::domain_error("azimuth undefined on the segment's axis line");
    }
    return f.azimuth;
}

KnotField::KnotField(const LatticeKnot& knot, double exclusion)
    : segments_(knotfield::segments(knot)), prefactor_(knot.prefactor()), exclusion_(exclusion) {}

FieldVector KnotField::at(const Vec3& p) const {
    FieldVector b{};
    for (const auto& seg : segments_) {
        b += segment_field(seg, p, prefactor_, exclusion_);
    }
    return b;
}

double KnotField::clearance(const Vec3& p) const {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& seg : segments_) {
        best = std::min(best, distance_to_segment(seg, p));
    }
    return best;
}

std::vector<FieldVector> KnotField::contributions(const Vec3& p) const {
    std::vector<FieldVector> out;
    out.reserve(segments_.size());
    for (const auto& seg : segments_) {
        out.push_back(segment_field(seg, p, prefactor_, exclusion_));
    }
    return out;
}

FieldVector total_field(const LatticeKnot& knot, const Vec3& p, double exclusion) {
    return KnotField(knot, exclusion).at(p);
}

}  // namespace knotfield
