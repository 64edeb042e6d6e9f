#include "knotfield/braid.hpp"
#include "knotfield/errors.hpp"
#include "knotfield/topology.hpp"
#include "knotfield/verification.hpp"

#include <gtest/gtest.h>

using namespace knotfield;

namespace {

// Face separation is along y; the braid diagram is the projection along it.
const Vec3 kBraidView{0.0, 1.0, 0.0};

std::vector<BraidLetter> letters(std::initializer_list<std::pair<unsigned, int>> items) {
    std::vector<BraidLetter> out;
    for (const auto& [g, s] : items) {
        out.push_back({g, s});
    }
    return out;
}

std::size_t parse_error_offset(std::string_view text) {
    try {
        parse_braid(text);
    } catch (const ParseError& e) {
        return e.offset();
    }
    ADD_FAILURE() << "no ParseError for '" << text << "'";
    return 0;
}

}  // namespace

TEST(ParseBraid, TrefoilWord) {
    const BraidWord w = parse_braid("s1 s1 s1");
    EXPECT_EQ(w.strands, 2u);
    EXPECT_EQ(w.letters, letters({{1, 1}, {1, 1}, {1, 1}}));
}

TEST(ParseBraid, FigureEightWord) {
    const BraidWord w = parse_braid("s1 s2^-1 s1 s2^-1");
    EXPECT_EQ(w.strands, 3u);
    EXPECT_EQ(w.letters, letters({{1, 1}, {2, -1}, {1, 1}, {2, -1}}));
}

TEST(ParseBraid, EmptyIsIdentityOnTwoStrands) {
    const BraidWord w = parse_braid("");
    EXPECT_EQ(w.strands, 2u);
    EXPECT_TRUE(w.letters.empty());
    EXPECT_EQ(parse_braid("  \t\n").letters.size(), 0u);
}

TEST(ParseBraid, AlternativeSpellings) {
    EXPECT_EQ(parse_braid("s2' 1 -2 +1").letters, letters({{2, -1}, {1, 1}, {2, -1}, {1, 1}}));
    EXPECT_EQ(parse_braid("S3").strands, 4u);
}

TEST(ParseBraid, StrandOverride) {
    EXPECT_EQ(parse_braid("s1", 4u).strands, 4u);
    EXPECT_THROW(parse_braid("s3", 3u), ParseError);
    EXPECT_THROW(parse_braid("s1", 1u), ParseError);
}

TEST(ParseBraid, ErrorsWithOffsets) {
    EXPECT_EQ(parse_error_offset("s1 x2"), 3u);
    EXPECT_EQ(parse_error_offset("s1 s0"), 3u);
    EXPECT_EQ(parse_error_offset("s1^2"), 2u);
    EXPECT_EQ(parse_error_offset("s1 s"), 4u);
    EXPECT_EQ(parse_error_offset("s1,s2"), 0u);
    EXPECT_EQ(parse_error_offset("0"), 0u);
}

TEST(FormatBraid, RoundTrip) {
    for (const char* text : {"s1 s1 s1", "s1 s2^-1 s1 s2^-1", "", "s3^-1 s1 s2"}) {
        const BraidWord w = parse_braid(text);
        EXPECT_EQ(parse_braid(format_braid(w), w.strands), w) << text;
    }
    const BraidWord wide = parse_braid("s1", 5u);
    EXPECT_EQ(parse_braid(format_braid(wide), wide.strands), wide);
}

TEST(BraidCounts, CrossingsAndWrithe) {
    EXPECT_EQ(crossing_count(parse_braid("s1 s1 s1")), 3u);
    EXPECT_EQ(writhe(parse_braid("s1 s1 s1")), 3);
    EXPECT_EQ(crossing_count(parse_braid("s1 s2^-1 s1 s2^-1")), 4u);
    EXPECT_EQ(writhe(parse_braid("s1 s2^-1 s1 s2^-1")), 0);
    EXPECT_EQ(crossing_count(parse_braid("")), 0u);
    EXPECT_EQ(writhe(parse_braid("")), 0);
}

TEST(BraidPermutation, CyclesAgreeWithUnionFind) {
    const std::vector<std::pair<std::string, std::vector<std::size_t>>> cases = {
        {"s1 s1 s1", {2}},        {"s1 s1", {1, 1}},          {"s1 s2^-1 s1 s2^-1", {3}},
        {"", {1, 1}},             {"s1 s2", {3}},             {"s1 s3", {2, 2}},
        {"s2 s3", {3, 1}},          {"s2 s1 s3 s2 s1", {4}},
    };
    for (const auto& [text, cycles] : cases) {
        const BraidWord w = parse_braid(text);
        EXPECT_EQ(closure_cycle_structure(w), cycles) << text;
        EXPECT_EQ(closure_components_union_find(w), cycles.size()) << text;
    }
}

TEST(CloseBraid, TrefoilWord) {
    const BraidWord w = parse_braid("s1 s1 s1");
    const BraidEmbedding e = close_braid_on_lattice(w);
    EXPECT_TRUE(validate(e.knot).ok());
    EXPECT_EQ(e.knot.name(), "braid(s1 s1 s1)");
    const ProjectionScan scan = scan_self_crossings(knot_polyline(e.knot), kBraidView);
    EXPECT_EQ(scan.degeneracies, 0u);
    EXPECT_EQ(scan.crossings.size(), 3u);
    EXPECT_EQ(scan.signed_sum(), 3);
}

TEST(CloseBraid, FigureEightWord) {
    const BraidWord w = parse_braid("s1 s2^-1 s1 s2^-1");
    const BraidEmbedding e = close_braid_on_lattice(w);
    EXPECT_TRUE(validate(e.knot).ok());
    const ProjectionScan scan = scan_self_crossings(knot_polyline(e.knot), kBraidView);
    EXPECT_EQ(scan.degeneracies, 0u);
    EXPECT_EQ(scan.crossings.size(), 4u);
    EXPECT_EQ(scan.signed_sum(), 0);
}

TEST(CloseBraid, LinkIsRejected) {
    try {
        close_braid_on_lattice(parse_braid("s1 s1"));
        FAIL() << "expected MultiComponentError";
    } catch (const MultiComponentError& e) {
        EXPECT_NE(std::string(e.what()).find("2-component"), std::string::npos);
    }
    EXPECT_THROW(close_braid_on_lattice(parse_braid("")), MultiComponentError);
}

TEST(CloseBraid, DiagramMatchesWordForManyKnots) {
    // Knot-closing words from a fixed list: valid embedding, y-projection
    // crossings equal to the word's letters and signs.
    const std::vector<std::string> words = {
        "s1",          "s1^-1",          "s1 s1 s1 s1 s1", "s1 s2",           "s1^-1 s2^-1",
        "s1 s2 s1 s2", "s1 s2^-1 s1 s2", "s1 s2 s3",       "s3 s2^-1 s1 s2^-1", "s1 s1 s1 s2",
        "s2 s1 s2 s1 s2^-1 s3"};
    for (const auto& text : words) {
        const BraidWord w = parse_braid(text);
        if (closure_cycle_structure(w).size() != 1) {
            continue;
        }
        const BraidEmbedding e = close_braid_on_lattice(w);
        EXPECT_TRUE(validate(e.knot).ok()) << text;
        const ProjectionScan scan = scan_self_crossings(knot_polyline(e.knot), kBraidView);
        EXPECT_EQ(scan.degeneracies, 0u) << text;
        EXPECT_EQ(scan.crossings.size(), crossing_count(w)) << text;
        EXPECT_EQ(scan.signed_sum(), writhe(w)) << text;
    }
}

TEST(CloseBraid, PlanLayout) {
    const BraidWord w = parse_braid("s1 s2^-1 s1 s2^-1");
    const EmbeddingPlan plan = plan_embedding(w);
    ASSERT_EQ(plan.placements.size(), 4u);
    for (std::size_t m = 0; m < plan.placements.size(); ++m) {
        const auto& c = plan.placements[m];
        EXPECT_EQ(c.x_end - c.x_begin, kLetterWidth);
        if (m > 0) {
            EXPECT_GE(c.x_begin, plan.placements[m - 1].x_end);
        }
    }
    EXPECT_EQ(plan.placements[0].migrating_position, 1u);
    EXPECT_EQ(plan.placements[1].migrating_position, 3u);
    EXPECT_EQ(plan.closures.size(), 3u);
    EXPECT_GE(kBackFaceY - kFrontFaceY, 2);
    const auto header = close_braid_on_lattice(w).header(w);
    EXPECT_EQ(header.front(), "braid word: s1 s2^-1 s1 s2^-1 on 3 strands");
}

TEST(CloseBraid, BuiltKnotsSatisfyHolonomyLinking) {
    for (const char* text : {"s1 s1 s1", "s1 s2^-1 s1 s2^-1"}) {
        const LatticeKnot k = close_braid_on_lattice(parse_braid(text)).knot;
        const SuiteResult r = suite_holonomy_linking(k, random_rectangular_loops(k, 10, 2));
        EXPECT_TRUE(r.pass) << text;
    }
}
