#include "knotfield/verification.hpp"

#include "knotfield/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace knotfield {

namespace {

constexpr std::size_t kMaxAttemptsPerSample = 10000;

std::string describe(const Vec3& v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

Axis random_axis(SeededRandom& rng) { return static_cast<Axis>(rng.integer(0, 2)); }

}  // namespace

std::vector<Loop> random_rectangular_loops(const LatticeKnot& knot, std::size_t count,
                                           std::uint64_t seed, double min_clearance) {
    SeededRandom rng(seed);
    const auto segs = segments(knot);
    const auto box = knot.bounding_box();
    std::vector<Loop> loops;
    std::size_t attempts = 0;
    while (loops.size() < count) {
        if (++attempts > kMaxAttemptsPerSample * std::max<std::size_t>(count, 1)) {
            throw std::runtime_error("could not place " + std::to_string(count) +
                                     " loops with clearance " + std::to_string(min_clearance));
        }
        const bool pierced = loops.size() % 2 == 0;
        Vec3 center;
        Axis normal;
        double half_u = 0.0;
        double half_v = 0.0;
        if (pierced) {
            const auto& seg = segs[static_cast<std::size_t>(
                rng.integer(0, static_cast<std::int64_t>(segs.size()) - 1))];
            normal = seg.axis();
            center = (seg.start().to_vec3() + seg.end().to_vec3()) * 0.5;
            const int a = axis_index(normal);
            center[a] += rng.uniform(-0.3, 0.3) * 0.5 * seg.length();
            center[(a + 1) % 3] += rng.uniform(-0.3, 0.3);
            center[(a + 2) % 3] += rng.uniform(-0.3, 0.3);
            half_u = rng.uniform(0.7, 3.0);
            half_v = rng.uniform(0.7, 3.0);
        } else {
            normal = random_axis(rng);
            for (int i = 0; i < 3; ++i) {
                center[i] = rng.uniform(box[0][i] - 1.0, box[1][i] + 1.0);
            }
            half_u = rng.uniform(0.5, 4.0);
            half_v = rng.uniform(0.5, 4.0);
        }
        Loop loop = rectangle_loop(center, normal, half_u, half_v,
                                   "rect" + std::to_string(loops.size() + 1));
        if (loop_clearance(knot, loop) < min_clearance) {
            continue;
        }
        loops.push_back(std::move(loop));
    }
    return loops;
}

std::vector<Vec3> random_complement_points(const LatticeKnot& knot, std::size_t count,
                                           std::uint64_t seed, double min_clearance) {
    SeededRandom rng(seed);
    const KnotField field(knot);
    const auto box = knot.bounding_box();
    std::vector<Vec3> points;
    std::size_t attempts = 0;
    while (points.size() < count) {
        if (++attempts > kMaxAttemptsPerSample * std::max<std::size_t>(count, 1)) {
            throw std::runtime_error("could not place complement points");
        }
        Vec3 p;
        for (int i = 0; i < 3; ++i) {
            p[i] = rng.uniform(box[0][i] - 2.0, box[1][i] + 2.0);
        }
        if (field.clearance(p) >= min_clearance) {
            points.push_back(p);
        }
    }
    return points;
}

double local_field_scale(const KnotField& field, const Vec3& p) {
    const auto parts = field.contributions(p);
    double scale = 0.0;
    for (std::size_t a = 0; a < parts.size(); ++a) {
        scale += norm(parts[a]) / distance_to_segment(field.segments()[a], p);
    }
    return scale;
}

FiniteDifferenceProbe probe_derivatives(const KnotField& field, const Vec3& p, double h) {
    // d[j][i] = dB_i / dx_j
    double d[3][3];
    for (int j = 0; j < 3; ++j) {
        Vec3 step;
        step[j] = h;
        const FieldVector diff = field.at(p + step) - field.at(p - step);
        for (int i = 0; i < 3; ++i) {
            d[j][i] = diff[i] / (2.0 * h);
        }
    }
    FiniteDifferenceProbe probe;
    probe.curl = {d[1][2] - d[2][1], d[2][0] - d[0][2], d[0][1] - d[1][0]};
    probe.divergence = d[0][0] + d[1][1] + d[2][2];
    probe.scale = local_field_scale(field, p);
    return probe;
}

SuiteResult suite_closed_form_vs_quadrature(std::size_t pairs, std::uint64_t seed,
                                            double quad_tol, double threshold) {
    SuiteResult r{"closed_form_vs_quadrature", true, 0, 0.0, threshold, {}};
    SeededRandom rng(seed);
    while (r.cases < pairs) {
        const LatticePoint start{rng.integer(-5, 5), rng.integer(-5, 5), rng.integer(-5, 5)};
        LatticePoint end = start;
        const int a = static_cast<int>(rng.integer(0, 2));
        const std::int64_t len = rng.integer(1, 8) * (rng.integer(0, 1) ? 1 : -1);
        (a == 0 ? end.x : a == 1 ? end.y : end.z) += len;
        const Segment seg(start, end, 1);
        const Vec3 mid = (start.to_vec3() + end.to_vec3()) * 0.5;
        Vec3 p;
        for (int i = 0; i < 3; ++i) {
            p[i] = mid[i] + rng.uniform(-6.0, 6.0);
        }
        if (distance_to_segment(seg, p) < 0.5) {
            continue;
        }
        const double k = rng.uniform(0.5, 2.0);
        const FieldVector exact = segment_field(seg, p, k);
        const FieldVector oracle = segment_field_quadrature(seg, p, k, quad_tol);
        const double diff = max_abs(exact - oracle);
        ++r.cases;
        if (diff > r.worst) {
            r.worst = diff;
        }
        if (diff > threshold) {
            r.pass = false;
            r.notes.push_back("segment " + describe(start.to_vec3()) + "->" +
                              describe(end.to_vec3()) + " at " + describe(p));
        }
    }
    return r;
}

std::vector<SuiteResult> suite_flatness(const LatticeKnot& knot, std::size_t points,
                                        std::uint64_t seed, double h, double threshold) {
    SuiteResult curl{"curl", true, 0, 0.0, threshold, {}};
    SuiteResult div{"divergence", true, 0, 0.0, threshold, {}};
    const KnotField field(knot);
    for (const auto& p : random_complement_points(knot, points, seed, 1.0)) {
        const auto probe = probe_derivatives(field, p, h);
        const double rc = norm(probe.curl) / probe.scale;
        const double rd = std::fabs(probe.divergence) / probe.scale;
        ++curl.cases;
        ++div.cases;
        curl.worst = std::max(curl.worst, rc);
        div.worst = std::max(div.worst, rd);
        if (rc > threshold) {
            curl.pass = false;
            curl.notes.push_back("curl at " + describe(p));
        }
        if (rd > threshold) {
            div.pass = false;
            div.notes.push_back("divergence at " + describe(p));
        }
    }
    return {curl, div};
}

SuiteResult suite_field_scaling(const LatticeKnot& knot, std::size_t points, std::uint64_t seed,
                                unsigned factor, double threshold) {
    SuiteResult r{"field_scaling", true, 0, 0.0, threshold, {}};
    const KnotField field(knot);
    const KnotField scaled(refine(knot, factor));
    const double lambda = factor;
    for (const auto& p : random_complement_points(knot, points, seed, 0.5)) {
        const FieldVector b = field.at(p);
        const FieldVector bs = scaled.at(p * lambda);
        const double rel = norm(bs * lambda - b) / norm(b);
        ++r.cases;
        r.worst = std::max(r.worst, rel);
        if (rel > threshold) {
            r.pass = false;
            r.notes.push_back("scaling at " + describe(p));
        }
    }
    return r;
}

SuiteResult suite_holonomy_linking(const LatticeKnot& knot, const std::vector<Loop>& loops,
                                   double threshold, double exclusion) {
    SuiteResult r{"holonomy_linking", true, 0, 0.0, threshold, {}};
    std::size_t linked = 0;
    for (const auto& loop : loops) {
        const HolonomyResult h = holonomy(knot, loop, 1e-8, exclusion);
        const LinkingEstimate lk = gauss_linking(knot, loop);
        const double expected = kFourPi * knot.prefactor() * static_cast<double>(lk.linking);
        const double rel = std::fabs(h.value - expected) / std::max(1.0, std::fabs(h.value));
        ++r.cases;
        linked += lk.linking != 0 ? 1 : 0;
        r.worst = std::max(r.worst, rel);
        if (rel >= threshold) {
            r.pass = false;
            r.notes.push_back(loop.name + ": holonomy " + std::to_string(h.value) + ", Lk " +
                              std::to_string(lk.linking));
        }
    }
    r.notes.insert(r.notes.begin(),
                   std::to_string(linked) + " of " + std::to_string(loops.size()) + " loops linked");
    return r;
}

SuiteResult suite_holonomy_scaling(const LatticeKnot& knot, const std::vector<Loop>& loops,
                                   unsigned factor, double threshold, double exclusion) {
    SuiteResult r{"holonomy_scaling", true, 0, 0.0, threshold, {}};
    const LatticeKnot fine = refine(knot, factor);
    for (const auto& loop : loops) {
        const double h = holonomy(knot, loop, 1e-8, exclusion).value;
        const double hs = holonomy(fine, loop.scaled(factor), 1e-8, exclusion).value;
        const double diff = std::fabs(hs - h);
        ++r.cases;
        r.worst = std::max(r.worst, diff);
        if (diff > threshold) {
            r.pass = false;
            r.notes.push_back(loop.name);
        }
    }
    return r;
}

bool VerificationReport::pass() const {
    return std::all_of(suites.begin(), suites.end(), [](const auto& s) { return s.pass; });
}

std::string VerificationReport::to_json() const {
    nlohmann::ordered_json j;
    j["knot"] = knot;
    j["seed"] = seed;
    j["pass"] = pass();
    j["suites"] = nlohmann::ordered_json::array();
    for (const auto& s : suites) {
        j["suites"].push_back({{"name", s.name},
                               {"pass", s.pass},
                               {"cases", s.cases},
                               {"worst", s.worst},
                               {"threshold", s.threshold},
                               {"notes", s.notes}});
    }
    return j.dump(2);
}

VerificationReport run_verification(const LatticeKnot& knot, const VerificationOptions& options) {
    const ValidationReport valid = validate(knot);
    if (!valid.ok()) {
        throw InvalidKnotError("knot '" + knot.name() + "' is not a valid lattice knot: " +
                               valid.summary());
    }
    VerificationReport report;
    report.knot = knot.name();
    report.seed = options.seed;
    report.suites.push_back(suite_closed_form_vs_quadrature(options.kernel_pairs, options.seed));
    for (auto& s : suite_flatness(knot, options.flatness_points, options.seed)) {
        report.suites.push_back(std::move(s));
    }
    report.suites.push_back(suite_field_scaling(knot, options.scaling_points, options.seed));
    const auto loops = random_rectangular_loops(knot, options.loops, options.seed);
    report.suites.push_back(suite_holonomy_linking(knot, loops, 1e-5, options.exclusion));
    report.suites.push_back(suite_holonomy_scaling(knot, loops, 2, 2e-5, options.exclusion));
    return report;
}

}  // namespace knotfield
