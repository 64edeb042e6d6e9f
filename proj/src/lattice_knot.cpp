#include "knotfield/lattice_knot.hpp"

#include "knotfield/errors.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace knotfield {

std::ostream& operator<<(std::ostream& os, const LatticePoint& p) {
    return os << '(' << p.x << ',' << p.y << ',' << p.z << ')';
}

char axis_name(Axis a) {
    switch (a) {
        case Axis::X: return 'x';
        case Axis::Y: return 'y';
        case Axis::Z: return 'z';
    }
    return '?';
}

Vec3 unit_vector(Axis a) {
    switch (a) {
        case Axis::X: return {1.0, 0.0, 0.0};
        case Axis::Y: return {0.0, 1.0, 0.0};
        case Axis::Z: return {0.0, 0.0, 1.0};
    }
    return {};
}

namespace {

// Index of the single differing coordinate, -1 if none, -2 if more than one.
int differing_axis(const LatticePoint& a, const LatticePoint& b) {
    int axis = -1;
    for (int i = 0; i < 3; ++i) {
        if (a[i] != b[i]) {
            if (axis != -1) {
                return -2;
            }
            axis = i;
        }
    }
    return axis;
}

std::string edge_label(const LatticePoint& a, const LatticePoint& b) {
    std::ostringstream os;
    os << a << "->" << b;
    return os.str();
}

struct Box {
    std::array<std::int64_t, 3> lo;
    std::array<std::int64_t, 3> hi;
};

Box edge_box(const LatticePoint& a, const LatticePoint& b) {
    Box box{};
    for (int i = 0; i < 3; ++i) {
        box.lo[i] = std::min(a[i], b[i]);
        box.hi[i] = std::max(a[i], b[i]);
    }
    return box;
}

// Axis-aligned segments coincide with their bounding boxes, so closed-box overlap
// is exact intersection.
bool boxes_touch(const Box& a, const Box& b) {
    for (int i = 0; i < 3; ++i) {
        if (a.hi[i] < b.lo[i] || b.hi[i] < a.lo[i]) {
            return false;
        }
    }
    return true;
}

}  // namespace

Segment::Segment(LatticePoint start, LatticePoint end, std::size_t index)
    : start_(start), end_(end), axis_(Axis::X), sign_(1), index_(index) {
    const int axis = differing_axis(start, end);
    if (axis == -1) {
        throw InvalidKnotError("zero-length segment at " + edge_label(start, end));
    }
    if (axis == -2) {
        throw InvalidKnotError("segment not axis-aligned: " + edge_label(start, end));
    }
    axis_ = static_cast<Axis>(axis);
    sign_ = end[axis] > start[axis] ? 1 : -1;
}

double Segment::length() const {
    const int a = axis_index(axis_);
    return static_cast<double>(std::abs(end_[a] - start_[a]));
}

std::array<std::int64_t, 2> Segment::transverse() const {
    switch (axis_) {
        case Axis::X: return {start_.y, start_.z};
        case Axis::Y: return {start_.x, start_.z};
        case Axis::Z: return {start_.x, start_.y};
    }
    return {};
}

std::array<std::int64_t, 2> Segment::axial_range() const {
    const int a = axis_index(axis_);
    return {std::min(start_[a], end_[a]), std::max(start_[a], end_[a])};
}

LatticeKnot::LatticeKnot(std::vector<LatticePoint> vertices, std::string name, double prefactor)
    : vertices_(std::move(vertices)), name_(std::move(name)), prefactor_(prefactor) {}

LatticeKnot LatticeKnot::with_prefactor(double k) const { return LatticeKnot(vertices_, name_, k); }

LatticeKnot LatticeKnot::reversed() const {
    std::vector<LatticePoint> rev;
    rev.reserve(vertices_.size());
    if (!vertices_.empty()) {
        rev.push_back(vertices_.front());
        for (auto it = vertices_.rbegin(); it + 1 != vertices_.rend(); ++it) {
            rev.push_back(*it);
        }
    }
    return LatticeKnot(std::move(rev), name_, prefactor_);
}

std::array<Vec3, 2> LatticeKnot::bounding_box() const {
    constexpr double inf = std::numeric_limits<double>::infinity();
    Vec3 lo{inf, inf, inf};
    Vec3 hi{-inf, -inf, -inf};
    for (const auto& v : vertices_) {
        const Vec3 p = v.to_vec3();
        for (int i = 0; i < 3; ++i) {
            lo[i] = std::min(lo[i], p[i]);
            hi[i] = std::max(hi[i], p[i]);
        }
    }
    return {lo, hi};
}

std::string_view violation_name(ViolationKind kind) {
    switch (kind) {
        case ViolationKind::TooFewVertices: return "too few vertices";
        case ViolationKind::ZeroLengthEdge: return "zero-length edge";
        case ViolationKind::NotAxisAligned: return "edge not axis-aligned";
        case ViolationKind::CollinearVertex: return "collinear vertex";
        case ViolationKind::SelfIntersection: return "self-intersection";
    }
    return "unknown";
}

bool ValidationReport::has(ViolationKind kind) const {
    return std::any_of(violations.begin(), violations.end(),
                       [kind](const Violation& v) { return v.kind == kind; });
}

std::string ValidationReport::summary() const {
    if (ok()) {
        return "ok";
    }
    std::ostringstream os;
    for (const auto& v : violations) {
        os << violation_name(v.kind) << ": " << v.message << '\n';
    }
    return os.str();
}

ValidationReport validate(const LatticeKnot& knot) {
    ValidationReport report;
    const auto& vs = knot.vertices();
    const std::size_t n = vs.size();
    if (n < 4) {
        report.violations.push_back({ViolationKind::TooFewVertices, 0, 0,
                                     "closed lattice polygon needs at least 4 vertices, got " +
                                         std::to_string(n)});
    }
    if (n < 2) {
        return report;
    }

    std::vector<int> axes(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& a = vs[i];
        const auto& b = vs[(i + 1) % n];
        axes[i] = differing_axis(a, b);
        if (axes[i] == -1) {
            report.violations.push_back({ViolationKind::ZeroLengthEdge, i, i,
                                         "edge " + std::to_string(i) + " " + edge_label(a, b)});
        } else if (axes[i] == -2) {
            report.violations.push_back({ViolationKind::NotAxisAligned, i, i,
                                         "edge " + std::to_string(i) + " " + edge_label(a, b)});
        }
    }

    // Adjacent edges: same axis means either a straight run through the shared
    // vertex or a backtrack that overlaps.
    for (std::size_t i = 0; i < n && n > 2; ++i) {
        const std::size_t j = (i + 1) % n;
        if (axes[i] < 0 || axes[j] < 0 || axes[i] != axes[j]) {
            continue;
        }
        const int ax = axes[i];
        const auto& a = vs[i];
        const auto& m = vs[j];
        const auto& b = vs[(j + 1) % n];
        const bool same_direction = (m[ax] - a[ax] > 0) == (b[ax] - m[ax] > 0);
        std::ostringstream os;
        os << "edges " << i << " and " << j << " at vertex " << j << ' ' << m;
        if (same_direction) {
            report.violations.push_back({ViolationKind::CollinearVertex, i, j, os.str()});
        } else {
            report.violations.push_back(
                {ViolationKind::SelfIntersection, i, j, os.str() + " fold back and overlap"});
        }
    }

    for (std::size_t i = 0; i < n; ++i) {
        if (axes[i] < 0) {
            continue;
        }
        const Box bi = edge_box(vs[i], vs[(i + 1) % n]);
        for (std::size_t j = i + 2; j < n; ++j) {
            if (axes[j] < 0 || (i == 0 && j == n - 1)) {
                continue;
            }
            const Box bj = edge_box(vs[j], vs[(j + 1) % n]);
            if (boxes_touch(bi, bj)) {
                std::ostringstream os;
                os << "edges " << i << ' ' << edge_label(vs[i], vs[(i + 1) % n]) << " and " << j
                   << ' ' << edge_label(vs[j], vs[(j + 1) % n]);
                report.violations.push_back({ViolationKind::SelfIntersection, i, j, os.str()});
            }
        }
    }
    return report;
}

std::vector<Segment> segments(const LatticeKnot& knot) {
    const auto& vs = knot.vertices();
    std::vector<Segment> out;
    out.reserve(vs.size());
    for (std::size_t i = 0; i < vs.size(); ++i) {
        out.emplace_back(vs[i], vs[(i + 1) % vs.size()], i + 1);
    }
    return out;
}

LatticeKnot refine(const LatticeKnot& knot, unsigned factor) {
    if (factor == 0) {
        throw std::invalid_argument("refine factor must be >= 1");
    }
    const auto f = static_cast<std::int64_t>(factor);
    std::vector<LatticePoint> scaled;
    scaled.reserve(knot.size());
    for (const auto& v : knot.vertices()) {
        scaled.push_back({v.x * f, v.y * f, v.z * f});
    }
    return LatticeKnot(std::move(scaled), knot.name(), knot.prefactor());
}

LatticeKnot canonical_trefoil() {
    return LatticeKnot({{2, 2, 0},
                        {2, 2, 6},
                        {2, 6, 6},
                        {4, 6, 6},
                        {4, 6, 2},
                        {4, 0, 2},
                        {0, 0, 2},
                        {0, 0, 4},
                        {0, 4, 4},
                        {6, 4, 4},
                        {6, 4, 0},
                        {6, 2, 0}},
                       "3_1");
}

LatticeKnot canonical_figure_eight() {
    return LatticeKnot({{2, 2, 0},
                        {2, 2, 6},
                        {2, 10, 6},
                        {2, 10, 2},
                        {2, 4, 2},
                        {6, 4, 2},
                        {6, 8, 2},
                        {6, 8, 4},
                        {0, 8, 4},
                        {0, 0, 4},
                        {4, 0, 4},
                        {4, 6, 4},
                        {4, 6, 0},
                        {4, 2, 0}},
                       "4_1");
}

LatticeKnot canonical_knot(std::string_view label) {
    if (label == "3_1") {
        return canonical_trefoil();
    }
    if (label == "4_1") {
        return canonical_figure_eight();
    }
    throw std::invalid_argument("unknown canonical knot '" + std::string(label) +
                                "' (expected 3_1 or 4_1)");
}

std::vector<LatticePoint> simplify_corners(std::vector<LatticePoint> cycle) {
    bool changed = true;
    while (changed && cycle.size() >= 3) {
        changed = false;
        std::vector<LatticePoint> kept;
        kept.reserve(cycle.size());
        const std::size_t n = cycle.size();
        for (std::size_t i = 0; i < n; ++i) {
            const auto& prev = cycle[(i + n - 1) % n];
            const auto& cur = cycle[i];
            const auto& next = cycle[(i + 1) % n];
            if (cur == next) {
                changed = true;
                continue;
            }
            const int a1 = differing_axis(prev, cur);
            const int a2 = differing_axis(cur, next);
            if (a1 >= 0 && a1 == a2 && (cur[a1] - prev[a1] > 0) == (next[a1] - cur[a1] > 0)) {
                changed = true;
                continue;
            }
            kept.push_back(cur);
        }
        cycle = std::move(kept);
    }
    return cycle;
}

LatticeKnot parse_knot_text(std::string_view text, std::string name) {
    std::vector<LatticePoint> vertices;
    std::size_t line_start = 0;
    while (line_start <= text.size()) {
        std::size_t line_end = text.find('\n', line_start);
        if (line_end == std::string_view::npos) {
            line_end = text.size();
        }
        std::string_view line = text.substr(line_start, line_end - line_start);
        std::size_t pos = 0;
        std::array<std::int64_t, 3> coords{};
        int count = 0;
        auto skip_ws = [&] {
            while (pos < line.size() &&
                   (line[pos] == ' ' || line[pos] == '\t' || line[pos] == '\r')) {
                ++pos;
            }
        };
        skip_ws();
        if (pos < line.size() && line[pos] != '#') {
            while (true) {
                skip_ws();
                if (pos >= line.size()) {
                    break;
                }
                if (count == 3) {
                    throw ParseError("expected 3 integers per vertex line", line_start + pos);
                }
                const char* first = line.data() + pos;
                const char* last = line.data() + line.size();
                if (*first == '+') {
                    ++first;
                }
                auto [ptr, ec] = std::from_chars(first, last, coords[count]);
                if (ec != std::errc{} ||
                    (ptr != last && *ptr != ' ' && *ptr != '\t' && *ptr != '\r')) {
                    throw ParseError("invalid integer coordinate", line_start + pos);
                }
                pos = static_cast<std::size_t>(ptr - line.data());
                ++count;
            }
            if (count != 3) {
                throw ParseError("expected 3 integers per vertex line", line_start);
            }
            vertices.push_back({coords[0], coords[1], coords[2]});
        }
        if (line_end == text.size()) {
            break;
        }
        line_start = line_end + 1;
    }
    return LatticeKnot(std::move(vertices), std::move(name));
}

LatticeKnot read_knot_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open knot file " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_knot_text(buffer.str(), path);
}

std::string format_knot_text(const LatticeKnot& knot, const std::vector<std::string>& header) {
    std::ostringstream os;
    os << "# knot " << knot.name() << ", " << knot.size() << " vertices\n";
    for (const auto& line : header) {
        os << "# " << line << '\n';
    }
    for (const auto& v : knot.vertices()) {
        os << v.x << ' ' << v.y << ' ' << v.z << '\n';
    }
    return os.str();
}

}  // namespace knotfield
