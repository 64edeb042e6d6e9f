#pragma once

#include "knotfield/lattice_knot.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace knotfield {

/// Artin generator sigma_i^{sign}.
struct BraidLetter {
    unsigned generator{1};
    int sign{1};

    friend bool operator==(const BraidLetter&, const BraidLetter&) = default;
};

struct BraidWord {
    unsigned strands{2};
    std::vector<BraidLetter> letters;

    friend bool operator==(const BraidWord&, const BraidWord&) = default;
};

/// Grammar: items separated by whitespace; an item is "s<i>", "s<i>^-1", "s<i>'"
/// or a signed integer shorthand ("2" = s2, "-2" = s2^-1). Strands default to
/// 1 + max generator (2 for the empty word). Throws ParseError with a byte offset.
BraidWord parse_braid(std::string_view text, std::optional<unsigned> strands = std::nullopt);

/// Canonical "s1 s2^-1" spelling; parse_braid(format_braid(w), w.strands) == w.
std::string format_braid(const BraidWord& word);

std::size_t crossing_count(const BraidWord& word);
int writhe(const BraidWord& word);

/// perm[p] is the final position (0-based) of the strand entering at position p.
std::vector<unsigned> braid_permutation(const BraidWord& word);

/// Cycle lengths of the permutation, sorted descending. One entry means the
/// closure is a knot.
std::vector<std::size_t> closure_cycle_structure(const BraidWord& word);

/// Component count of the closure by union-find over strand endpoints.
std::size_t closure_components_union_find(const BraidWord& word);

inline constexpr std::int64_t kFrontFaceY = 0;
inline constexpr std::int64_t kBackFaceY = 2;
inline constexpr std::int64_t kLetterWidth = 4;

/// Where one braid letter sits on the lattice. Strand positions are 1-based;
/// position p runs at height z = 2p.
struct CrossingPlacement {
    std::size_t letter{0};
    std::int64_t x_begin{0};
    std::int64_t x_end{0};
    BraidLetter generator;
    /// Position (i or i+1) of the strand that moves to the back face.
    unsigned migrating_position{0};
    std::int64_t z_low{0};
    std::int64_t z_mid{0};
    std::int64_t z_high{0};
};

/// Return path of the strand leaving the braid at position p, drawn on the
/// front face around the braid.
struct ClosureArc {
    unsigned position{0};
    std::int64_t x_right{0};
    std::int64_t x_left{0};
    std::int64_t z_top{0};
};

struct EmbeddingPlan {
    std::vector<CrossingPlacement> placements;
    std::vector<ClosureArc> closures;
    LatticePoint box_min;
    LatticePoint box_max;
};

EmbeddingPlan plan_embedding(const BraidWord& word);

struct BraidEmbedding {
    LatticeKnot knot;
    EmbeddingPlan plan;

    /// Layout constants, for the knot file's comment header.
    std::vector<std::string> header(const BraidWord& word) const;
};

/// Builds the lattice closure of the word. Throws MultiComponentError when the
/// closure is a link, std::logic_error if the layout ever fails validation.
BraidEmbedding close_braid_on_lattice(const BraidWord& word);

}  // namespace knotfield
