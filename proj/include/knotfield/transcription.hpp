#pragma once

#include "knotfield/biot_savart.hpp"
#include "knotfield/lattice_knot.hpp"
#include "knotfield/vec3.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

// Printed closed-form field expressions for the canonical 3_1 and 4_1 lattice
// knots, stored term by term exactly as typeset (slips included), plus a ledger
// that lines each printed term up with the generic engine's segment contribution.

namespace knotfield {

/// offset + coeff * coordinate[var]; "(4-y)" is {4, -1, Y}.
struct Affine {
    double offset{0.0};
    double coeff{1.0};
    Axis var{Axis::X};

    double operator()(const Vec3& p) const { return offset + coeff * p[axis_index(var)]; }
    /// Coordinate value at which the expression vanishes.
    double root() const { return -offset / coeff; }
    std::string str() const;
};

/// numerator / sqrt(radicand[0]^2 + radicand[1]^2 + radicand[2]^2)
struct BracketPart {
    Affine numerator;
    std::array<Affine, 3> radicand;
};

enum class SignMark {
    Explicit,  // a printed + or -
    Leading,   // first term of an equation, no sign needed
    Missing,   // continuation line printed without a sign; read as +
};

/// sign * numerator / (den[0]^2 + den[1]^2) * [first - second]
struct PrintedTerm {
    int component{0};  // 0 = Bx, 1 = By, 2 = Bz
    int index{0};      // 1-based within the component
    int sign{1};
    SignMark mark{SignMark::Explicit};
    Affine numerator;
    std::array<Affine, 2> denominator;
    std::array<BracketPart, 2> bracket;
    /// Typesetting remark recorded at transcription time, empty if none.
    std::string note;

    /// Throws OnConductorError when any denominator falls below 1e-6.
    double evaluate(const Vec3& p) const;
    std::string str() const;
};

struct TranscribedField {
    std::string label;
    std::vector<PrintedTerm> terms;

    /// Literal sum of the printed terms, k = 1.
    FieldVector evaluate(const Vec3& p) const;
    std::array<std::size_t, 3> terms_per_component() const;
};

/// "3_1" (three equations, 8+8+8 terms) or "4_1" (10+8+10).
const TranscribedField& transcribed_field(std::string_view label);

FieldVector eval_transcribed(std::string_view label, const Vec3& p);

/// Clean printed-form terms for an arbitrary lattice knot, two per segment, in
/// the same notation as the transcriptions.
TranscribedField terms_from_knot(const LatticeKnot& knot);

enum class TermStatus {
    Match,          // equals the matched segment's contribution
    SignFlipped,    // equals minus the contribution
    Mismatch,       // same line, different value (endpoints or bracket slip)
    Unmatched,      // no segment lies on the line named by the denominator
};

std::string_view term_status_name(TermStatus s);

struct LedgerEntry {
    int component{0};
    int index{0};
    /// α of the segment whose line the denominator names, 0 when unmatched.
    std::size_t segment{0};
    TermStatus status{TermStatus::Unmatched};
    double max_abs_difference{0.0};
    std::vector<std::string> remarks;

    bool flagged() const { return status != TermStatus::Match || !remarks.empty(); }
};

struct DiscrepancyLedger {
    std::string label;
    std::size_t sample_points{0};
    std::vector<LedgerEntry> entries;
    /// α of segments not covered by exactly two printed terms.
    std::vector<std::size_t> uncovered_segments;

    std::size_t count(TermStatus s) const;
    std::size_t flagged() const;
    std::size_t matched_by_structure() const;
    std::string to_text() const;
    std::string to_json() const;
};

/// Compares every term against the knot's segments at `points` seeded random
/// sample points.
DiscrepancyLedger discrepancy_ledger(const TranscribedField& printed, const LatticeKnot& knot,
                                     std::size_t points = 20, std::uint64_t seed = 0);

/// Ledger for a canonical label against its canonical knot.
DiscrepancyLedger discrepancy_ledger(std::string_view label, std::size_t points = 20,
                                     std::uint64_t seed = 0);

}  // namespace knotfield
