#pragma once

#include "knotfield/biot_savart.hpp"
#include "knotfield/lattice_knot.hpp"

#include <array>
#include <cstddef>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace knotfield {

struct GridSpec {
    Vec3 origin;
    double spacing{1.0};
    std::array<std::size_t, 3> counts{1, 1, 1};

    /// Throws std::invalid_argument for non-positive spacing or a zero count.
    void check() const;
    std::size_t total() const { return counts[0] * counts[1] * counts[2]; }
    Vec3 point(std::size_t i, std::size_t j, std::size_t k) const;
};

enum class OutputFormat { Csv, Jsonl, Vtk };

OutputFormat parse_output_format(std::string_view name);

struct FieldSample {
    Vec3 point;
    FieldVector field;
    bool on_conductor{false};
};

/// Samples in row order with z varying fastest, then y, then x. Points within
/// `exclusion` of the circuit come back masked with NaN components. Work is split
/// over `threads` workers writing disjoint slots, so the result does not depend
/// on the thread count.
std::vector<FieldSample> sample_field(const LatticeKnot& knot, const GridSpec& grid,
                                      double exclusion = kDefaultExclusionRadius,
                                      unsigned threads = 1);

/// Shortest round-trip decimal spelling; "nan" for NaN.
std::string format_real(double v);

void write_csv(std::ostream& os, const std::vector<FieldSample>& samples);
void write_jsonl(std::ostream& os, const std::vector<FieldSample>& samples);
/// Legacy VTK STRUCTURED_POINTS with a B vector field and an on_conductor mask,
/// re-ordered to VTK's x-fastest layout.
void write_vtk(std::ostream& os, const std::vector<FieldSample>& samples, const GridSpec& grid,
               const std::string& title);

void write_samples(std::ostream& os, const std::vector<FieldSample>& samples,
                   const GridSpec& grid, OutputFormat format, const std::string& title);

}  // namespace knotfield
