#pragma once

#include "knotfield/biot_savart.hpp"
#include "knotfield/lattice_knot.hpp"
#include "knotfield/topology.hpp"

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace knotfield {

/// mt19937_64 with fixed conversions to real and integer ranges, so a seed
/// gives the same stream with every standard library (the std distributions
/// are implementation-defined).
class SeededRandom {
public:
    explicit SeededRandom(std::uint64_t seed) : engine_(seed) {}
    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Uniform integer in [lo, hi]; the modulo bias is negligible for small ranges.
    std::int64_t integer(std::int64_t lo, std::int64_t hi) {
        const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<std::int64_t>(engine_() % span);
    }

private:
    std::mt19937_64 engine_;
};

/// Axis-aligned rectangles with real-valued corners, each at least min_clearance
/// from the knot. Half of them are centred near a segment midpoint with the
/// segment piercing the rectangle, so the sample contains linked loops.
std::vector<Loop> random_rectangular_loops(const LatticeKnot& knot, std::size_t count,
                                           std::uint64_t seed, double min_clearance = 0.5);

/// Points in the knot's bounding box grown by 2, each at least min_clearance
/// from the circuit.
std::vector<Vec3> random_complement_points(const LatticeKnot& knot, std::size_t count,
                                           std::uint64_t seed, double min_clearance = 1.0);

/// Sum over segments of |B_alpha| / d_alpha: the size of the field's first
/// derivatives, used to normalise finite-difference curl and divergence.
double local_field_scale(const KnotField& field, const Vec3& p);

struct FiniteDifferenceProbe {
    Vec3 curl;
    double divergence{0.0};
    double scale{0.0};
};

/// Second-order central differences with step h.
FiniteDifferenceProbe probe_derivatives(const KnotField& field, const Vec3& p, double h = 1e-3);

struct SuiteResult {
    std::string name;
    bool pass{false};
    std::size_t cases{0};
    /// Largest observed value of the suite's test statistic.
    double worst{0.0};
    double threshold{0.0};
    std::vector<std::string> notes;
};

SuiteResult suite_closed_form_vs_quadrature(std::size_t pairs, std::uint64_t seed,
                                            double quad_tol = 1e-10, double threshold = 1e-8);

/// Two results: curl then divergence, each relative to local_field_scale.
std::vector<SuiteResult> suite_flatness(const LatticeKnot& knot, std::size_t points,
                                        std::uint64_t seed, double h = 1e-3,
                                        double threshold = 1e-4);

/// B(lambda x; lambda K) against B(x; K) / lambda, relative error.
SuiteResult suite_field_scaling(const LatticeKnot& knot, std::size_t points, std::uint64_t seed,
                                unsigned factor = 2, double threshold = 1e-9);

/// |holonomy - 4 pi k Lk| against threshold * max(1, |holonomy|), Lk from the
/// Gauss oracle.
SuiteResult suite_holonomy_linking(const LatticeKnot& knot, const std::vector<Loop>& loops,
                                   double threshold = 1e-5,
                                   double exclusion = kDefaultExclusionRadius);

/// Holonomy of refine(knot, factor) around each loop scaled by factor, against
/// the unrefined value.
SuiteResult suite_holonomy_scaling(const LatticeKnot& knot, const std::vector<Loop>& loops,
                                   unsigned factor = 2, double threshold = 2e-5,
                                   double exclusion = kDefaultExclusionRadius);

struct VerificationOptions {
    std::uint64_t seed{0};
    std::size_t kernel_pairs{1000};
    std::size_t flatness_points{200};
    std::size_t scaling_points{100};
    std::size_t loops{20};
    double exclusion{kDefaultExclusionRadius};
};

struct VerificationReport {
    std::string knot;
    std::uint64_t seed{0};
    std::vector<SuiteResult> suites;

    bool pass() const;
    std::string to_json() const;
};

VerificationReport run_verification(const LatticeKnot& knot, const VerificationOptions& options);

}  // namespace knotfield
