#include "knotfield/topology.hpp"

#include "knotfield/errors.hpp"
#include "knotfield/quadrature.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace knotfield {

void Loop::check() const {
    if (vertices.size() < 3) {
        throw std::invalid_argument("loop '" + name + "' needs at least 3 vertices");
    }
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        if (vertices[i] == vertices[(i + 1) % vertices.size()]) {
            throw std::invalid_argument("loop '" + name + "' repeats vertex " + std::to_string(i));
        }
    }
}

Loop Loop::reversed() const {
    Loop out{{}, name + " (reversed)"};
    out.vertices.assign(vertices.rbegin(), vertices.rend());
    return out;
}

Loop Loop::scaled(double factor) const {
    Loop out{vertices, name};
    for (auto& v : out.vertices) {
        v *= factor;
    }
    return out;
}

Loop Loop::translated(const Vec3& offset) const {
    Loop out{vertices, name};
    for (auto& v : out.vertices) {
        v += offset;
    }
    return out;
}

Loop rectangle_loop(const Vec3& center, Axis normal_axis, double half_u, double half_v,
                    std::string name) {
    const int n = axis_index(normal_axis);
    const Vec3 eu = unit_vector(static_cast<Axis>((n + 1) % 3)) * half_u;
    const Vec3 ev = unit_vector(static_cast<Axis>((n + 2) % 3)) * half_v;
    return Loop{{center - eu - ev, center + eu - ev, center + eu + ev, center - eu + ev},
                std::move(name)};
}

std::vector<Vec3> knot_polyline(const LatticeKnot& knot) {
    std::vector<Vec3> out;
    out.reserve(knot.size());
    for (const auto& v : knot.vertices()) {
        out.push_back(v.to_vec3());
    }
    return out;
}

double segment_segment_distance(const Vec3& p1, const Vec3& q1, const Vec3& p2, const Vec3& q2) {
    const Vec3 d1 = q1 - p1;
    const Vec3 d2 = q2 - p2;
    const Vec3 r = p1 - p2;
    const double a = dot(d1, d1);
    const double e = dot(d2, d2);
    const double f = dot(d2, r);
    double s = 0.0;
    double t = 0.0;
    if (a <= 0.0 && e <= 0.0) {
        return norm(r);
    }
    if (a <= 0.0) {
        t = std::clamp(f / e, 0.0, 1.0);
    } else {
        const double c = dot(d1, r);
        if (e <= 0.0) {
            s = std::clamp(-c / a, 0.0, 1.0);
        } else {
            const double b = dot(d1, d2);
            const double denom = a * e - b * b;
            s = denom > 0.0 ? std::clamp((b * f - c * e) / denom, 0.0, 1.0) : 0.0;
            t = (b * s + f) / e;
            if (t < 0.0) {
                t = 0.0;
                s = std::clamp(-c / a, 0.0, 1.0);
            } else if (t > 1.0) {
                t = 1.0;
                s = std::clamp((b - c) / a, 0.0, 1.0);
            }
        }
    }
    return norm((p1 + d1 * s) - (p2 + d2 * t));
}

namespace {

struct Contact {
    double distance{std::numeric_limits<double>::infinity()};
    std::size_t loop_edge{0};
    std::size_t segment{0};
};

Contact closest_contact(const std::vector<Segment>& segs, const Loop& loop) {
    Contact best;
    const std::size_t n = loop.vertices.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec3& a = loop.vertices[i];
        const Vec3& b = loop.vertices[(i + 1) % n];
        for (const auto& seg : segs) {
            const double d =
                segment_segment_distance(a, b, seg.start().to_vec3(), seg.end().to_vec3());
            if (d < best.distance) {
                best = {d, i, seg.index()};
            }
        }
    }
    return best;
}

void require_clearance(const std::vector<Segment>& segs, const Loop& loop, double exclusion) {
    const Contact c = closest_contact(segs, loop);
    if (c.distance < exclusion) {
        std::ostringstream os;
        os << "loop '" << loop.name << "' edge " << c.loop_edge << " passes within " << c.distance
           << " of knot segment " << c.segment;
        throw OnConductorError(os.str(), c.segment, c.loop_edge);
    }
}

}  // namespace

double loop_clearance(const LatticeKnot& knot, const Loop& loop) {
    return closest_contact(segments(knot), loop).distance;
}

HolonomyResult holonomy(const LatticeKnot& knot, const Loop& loop, double tol, double exclusion) {
    loop.check();
    const KnotField field(knot, exclusion);
    require_clearance(field.segments(), loop, exclusion);

    HolonomyResult result;
    const std::size_t n = loop.vertices.size();
    QuadratureOptions opt;
    opt.abs_tol = tol / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec3 a = loop.vertices[i];
        const Vec3 d = loop.vertices[(i + 1) % n] - a;
        auto integrand = [&](double t) { return dot(field.at(a + d * t), d); };
        const auto q = integrate_adaptive<double>(integrand, 0.0, 1.0, opt);
        result.value += q.value;
        result.error_estimate += q.error;
        result.field_evaluations += q.evaluations;
        ++result.edges_evaluated;
    }
    const double quantum = kFourPi * knot.prefactor();
    if (quantum != 0.0) {
        result.inferred_linking = std::lround(result.value / quantum);
    }
    result.residual =
        std::fabs(result.value - quantum * static_cast<double>(result.inferred_linking));
    return result;
}

LinkingEstimate gauss_linking(const LatticeKnot& knot, const Loop& loop, double tol) {
    loop.check();
    const auto segs = segments(knot);
    require_clearance(segs, loop, std::numeric_limits<double>::min());

    const std::size_t n = loop.vertices.size();
    const double pair_tol = kFourPi * tol / static_cast<double>(n * segs.size());
    QuadratureOptions outer;
    outer.abs_tol = pair_tol;
    QuadratureOptions inner;
    inner.abs_tol = pair_tol * 1e-2;

    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec3 a = loop.vertices[i];
        const Vec3 da = loop.vertices[(i + 1) % n] - a;
        for (const auto& seg : segs) {
            const Vec3 s = seg.start().to_vec3();
            const Vec3 ds = seg.end().to_vec3() - s;
            const Vec3 c = cross(da, ds);
            if (dot(c, c) == 0.0) {
                continue;
            }
            auto row = [&](double sigma) {
                const Vec3 p = a + da * sigma;
                auto gauss = [&](double tau) {
                    const Vec3 r = p - (s + ds * tau);
                    const double d = norm(r);
                    return dot(r, c) / (d * d * d);
                };
                return integrate_adaptive<double>(gauss, 0.0, 1.0, inner).value;
            };
            total += integrate_adaptive<double>(row, 0.0, 1.0, outer).value;
        }
    }
    LinkingEstimate est;
    est.raw = total / kFourPi;
    est.linking = std::lround(est.raw);
    est.residual = std::fabs(est.raw - static_cast<double>(est.linking));
    if (!(est.residual < 0.25)) {
        throw PrecisionError("Gauss linking integral " + std::to_string(est.raw) +
                                 " is not within 0.25 of an integer; refine the quadrature",
                             est.raw);
    }
    return est;
}

long linking_number(const LatticeKnot& knot, const Loop& loop) {
    return gauss_linking(knot, loop).linking;
}

int ProjectionScan::signed_sum() const {
    int sum = 0;
    for (const auto& c : crossings) {
        sum += c.sign;
    }
    return sum;
}

namespace {

struct Projector {
    Vec3 view;
    Vec3 e1;
    Vec3 e2;

    explicit Projector(const Vec3& v) : view(v / norm(v)) {
        const Vec3 helper = std::fabs(view.x) < 0.9 ? Vec3{1.0, 0.0, 0.0} : Vec3{0.0, 1.0, 0.0};
        e1 = cross(view, helper);
        e1 = e1 / norm(e1);
        e2 = cross(view, e1);
    }

    std::array<double, 2> plane(const Vec3& p) const { return {dot(p, e1), dot(p, e2)}; }
    double depth(const Vec3& p) const { return dot(p, view); }
};

struct ProjEdge {
    std::size_t index;  // edge index in the source polyline
    Vec3 a;
    Vec3 b;
    std::array<double, 2> pa;
    std::array<double, 2> pb;
};

double cross2(const std::array<double, 2>& u, const std::array<double, 2>& v) {
    return u[0] * v[1] - u[1] * v[0];
}

std::array<double, 2> sub2(const std::array<double, 2>& u, const std::array<double, 2>& v) {
    return {u[0] - v[0], u[1] - v[1]};
}

std::vector<ProjEdge> project_edges(const std::vector<Vec3>& cycle, const Projector& proj) {
    std::vector<ProjEdge> edges;
    const std::size_t n = cycle.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec3& a = cycle[i];
        const Vec3& b = cycle[(i + 1) % n];
        ProjEdge e{i, a, b, proj.plane(a), proj.plane(b)};
        const auto d = sub2(e.pb, e.pa);
        const double len3 = norm(b - a);
        if (std::hypot(d[0], d[1]) <= 1e-12 * std::max(1.0, len3)) {
            continue;  // edge seen end-on
        }
        edges.push_back(e);
    }
    return edges;
}

enum class Hit { None, Transverse, Degenerate };

Hit intersect(const ProjEdge& e, const ProjEdge& f, double& s, double& t) {
    const auto r = sub2(e.pb, e.pa);
    const auto w = sub2(f.pb, f.pa);
    const auto qp = sub2(f.pa, e.pa);
    const double denom = cross2(r, w);
    const double scale = std::hypot(r[0], r[1]) * std::hypot(w[0], w[1]);
    constexpr double eps = 1e-10;
    if (std::fabs(denom) <= eps * scale) {
        // Parallel: degenerate only if collinear and overlapping.
        if (std::fabs(cross2(qp, r)) > eps * std::hypot(r[0], r[1]) * std::max(1.0, std::hypot(qp[0], qp[1]))) {
            return Hit::None;
        }
        const double rr = r[0] * r[0] + r[1] * r[1];
        const double t0 = (qp[0] * r[0] + qp[1] * r[1]) / rr;
        const auto qp1 = sub2(f.pb, e.pa);
        const double t1 = (qp1[0] * r[0] + qp1[1] * r[1]) / rr;
        const double lo = std::min(t0, t1);
        const double hi = std::max(t0, t1);
        return (hi < -eps || lo > 1.0 + eps) ? Hit::None : Hit::Degenerate;
    }
    s = cross2(qp, w) / denom;
    t = cross2(qp, r) / denom;
    if (s < -eps || s > 1.0 + eps || t < -eps || t > 1.0 + eps) {
        return Hit::None;
    }
    if (s < eps || s > 1.0 - eps || t < eps || t > 1.0 - eps) {
        return Hit::Degenerate;
    }
    return Hit::Transverse;
}

void record(const ProjEdge& e, const ProjEdge& f, double s, double t, const Projector& proj,
            ProjectionScan& scan, bool only_e_over = false) {
    const double de = proj.depth(e.a + (e.b - e.a) * s);
    const double df = proj.depth(f.a + (f.b - f.a) * t);
    if (std::fabs(de - df) <= 1e-12) {
        ++scan.degeneracies;  // genuine 3D intersection
        return;
    }
    const bool e_over = de > df;
    if (only_e_over && !e_over) {
        return;
    }
    const ProjEdge& over = e_over ? e : f;
    const ProjEdge& under = e_over ? f : e;
    const double orient = dot(cross(over.b - over.a, under.b - under.a), proj.view);
    scan.crossings.push_back({over.index, under.index, orient > 0.0 ? 1 : -1});
}

}  // namespace

ProjectionScan scan_self_crossings(const std::vector<Vec3>& cycle, const Vec3& view) {
    const Projector proj(view);
    const auto edges = project_edges(cycle, proj);
    ProjectionScan scan;
    const std::size_t m = edges.size();
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            const bool adjacent = (j == i + 1) || (i == 0 && j == m - 1);
            double s = 0.0;
            double t = 0.0;
            const Hit hit = intersect(edges[i], edges[j], s, t);
            if (adjacent) {
                // Adjacent edges always share their joint; only an overlap counts.
                const auto r = sub2(edges[i].pb, edges[i].pa);
                const auto w = sub2(edges[j].pb, edges[j].pa);
                const double scale = std::hypot(r[0], r[1]) * std::hypot(w[0], w[1]);
                if (std::fabs(cross2(r, w)) <= 1e-10 * scale && r[0] * w[0] + r[1] * w[1] < 0.0) {
                    ++scan.degeneracies;
                }
                continue;
            }
            if (hit == Hit::Degenerate) {
                ++scan.degeneracies;
            } else if (hit == Hit::Transverse) {
                record(edges[i], edges[j], s, t, proj, scan);
            }
        }
    }
    return scan;
}

ProjectionScan scan_crossings(const std::vector<Vec3>& a, const std::vector<Vec3>& b,
                              const Vec3& view) {
    const Projector proj(view);
    const auto ea = project_edges(a, proj);
    const auto eb = project_edges(b, proj);
    ProjectionScan scan;
    for (const auto& e : ea) {
        for (const auto& f : eb) {
            double s = 0.0;
            double t = 0.0;
            const Hit hit = intersect(e, f, s, t);
            if (hit == Hit::Degenerate) {
                ++scan.degeneracies;
            } else if (hit == Hit::Transverse) {
                record(e, f, s, t, proj, scan, true);
            }
        }
    }
    return scan;
}

long linking_number_by_projection(const LatticeKnot& knot, const Loop& loop) {
    loop.check();
    const auto poly = knot_polyline(knot);
    // Irrational-ish directions avoid lattice-aligned coincidences.
    const std::array<Vec3, 4> views = {Vec3{0.2113248654, 0.5773502692, 0.7886751346},
                                       Vec3{0.7071067812, 0.3090169944, 0.6360098248},
                                       Vec3{-0.4142135624, 0.8660254038, 0.2795084972},
                                       Vec3{0.5351837584, -0.6180339887, 0.5760484367}};
    for (const auto& v : views) {
        const ProjectionScan scan = scan_crossings(loop.vertices, poly, v);
        if (scan.degeneracies == 0) {
            return scan.signed_sum();
        }
    }
    throw PrecisionError("no generic projection found for loop '" + loop.name + "'", 0.0);
}

FlatConnectionReport verify_flat_connection(const LatticeKnot& knot, const std::vector<Loop>& loops,
                                            double tol, double exclusion) {
    FlatConnectionReport report;
    for (const auto& loop : loops) {
        FlatConnectionEntry entry;
        entry.loop_name = loop.name;
        entry.holonomy = holonomy(knot, loop, 0.1 * tol, exclusion);
        entry.linking = linking_number(knot, loop);
        entry.expected = kFourPi * knot.prefactor() * static_cast<double>(entry.linking);
        entry.residual = std::fabs(entry.holonomy.value - entry.expected);
        entry.pass = entry.residual <= tol * std::max(1.0, std::fabs(entry.holonomy.value));
        report.pass = report.pass && entry.pass;
        report.entries.push_back(std::move(entry));
    }
    return report;
}

Loop parse_loop_text(std::string_view text, std::string name) {
    Loop loop{{}, std::move(name)};
    std::size_t line_start = 0;
    while (line_start <= text.size()) {
        std::size_t line_end = text.find('\n', line_start);
        if (line_end == std::string_view::npos) {
            line_end = text.size();
        }
        const std::string_view line = text.substr(line_start, line_end - line_start);
        std::size_t pos = line.find_first_not_of(" \t\r");
        if (pos != std::string_view::npos && line[pos] != '#') {
            std::array<double, 3> c{};
            int count = 0;
            while (pos != std::string_view::npos && pos < line.size()) {
                if (count == 3) {
                    throw ParseError("expected 3 numbers per vertex line", line_start + pos);
                }
                const char* first = line.data() + pos;
                const char* last = line.data() + line.size();
                if (*first == '+') {
                    ++first;
                }
                auto [ptr, ec] = std::from_chars(first, last, c[count]);
                if (ec != std::errc{} ||
                    (ptr != last && *ptr != ' ' && *ptr != '\t' && *ptr != '\r')) {
                    throw ParseError("invalid coordinate", line_start + pos);
                }
                ++count;
                pos = line.find_first_not_of(" \t\r", static_cast<std::size_t>(ptr - line.data()));
            }
            if (count != 3) {
                throw ParseError("expected 3 numbers per vertex line", line_start);
            }
            loop.vertices.push_back({c[0], c[1], c[2]});
        }
        if (line_end == text.size()) {
            break;
        }
        line_start = line_end + 1;
    }
    return loop;
}

Loop read_loop_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open loop file " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_loop_text(buffer.str(), path);
}

std::string format_loop_text(const Loop& loop) {
    std::ostringstream os;
    os.precision(17);
    os << "# loop " << loop.name << '\n';
    for (const auto& v : loop.vertices) {
        os << v.x << ' ' << v.y << ' ' << v.z << '\n';
    }
    return os.str();
}

}  // namespace knotfield
