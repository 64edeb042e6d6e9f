#include "knotfield/errors.hpp"
#include "knotfield/transcription.hpp"
#include "knotfield/verification.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <cmath>
#include <set>
#include <utility>

using namespace knotfield;

namespace {

using TermKey = std::pair<int, int>;  // component, index

std::set<TermKey> with_status(const DiscrepancyLedger& ledger, TermStatus s) {
    std::set<TermKey> out;
    for (const auto& e : ledger.entries) {
        if (e.status == s) {
            out.insert({e.component, e.index});
        }
    }
    return out;
}

const LedgerEntry& entry(const DiscrepancyLedger& ledger, int component, int index) {
    for (const auto& e : ledger.entries) {
        if (e.component == component && e.index == index) {
            return e;
        }
    }
    throw std::out_of_range("no such ledger entry");
}

}  // namespace

TEST(Transcription, TermCounts) {
    EXPECT_EQ(transcribed_field("3_1").terms_per_component(), (std::array<std::size_t, 3>{8, 8, 8}));
    EXPECT_EQ(transcribed_field("4_1").terms_per_component(),
              (std::array<std::size_t, 3>{10, 8, 10}));
    EXPECT_THROW(transcribed_field("5_2"), std::invalid_argument);
}

TEST(Transcription, TrefoilBxFirstTermAtPoint) {
    const PrintedTerm& t = transcribed_field("3_1").terms.front();
    ASSERT_EQ(t.component, 0);
    ASSERT_EQ(t.index, 1);
    const double expected = -(1.0 / 37.0) * (4.0 / std::sqrt(53.0) - 2.0 / std::sqrt(41.0));
    EXPECT_NEAR(t.evaluate({0, 0, 1}), expected, 1e-16);
}

TEST(Transcription, TrefoilBxFirstTermVanishesOnZeroPlane) {
    const PrintedTerm& t = transcribed_field("3_1").terms.front();
    for (const Vec3& p : {Vec3{0, 0, 0}, Vec3{1.5, -3, 0}, Vec3{9, 4, 0}}) {
        EXPECT_EQ(t.evaluate(p), 0.0);
    }
}

TEST(Transcription, SingularDenominator) {
    const PrintedTerm& t = transcribed_field("3_1").terms.front();
    EXPECT_THROW(t.evaluate({6, 1, 0}), OnConductorError);
    EXPECT_THROW(eval_transcribed("3_1", {6, 1, 0}), OnConductorError);
}

TEST(Transcription, PrintedFieldIsCloseButNotEqualToEngine) {
    // The printed equations contain slips, so the literal sum differs from the
    // engine; it is still a field of the right size.
    const Vec3 p{5, 3, 2};
    const FieldVector printed = eval_transcribed("3_1", p);
    const FieldVector engine = total_field(canonical_trefoil(), p);
    EXPECT_TRUE(is_finite(printed));
    EXPECT_GT(norm(printed - engine), 1e-6);
    EXPECT_LT(norm(printed - engine), 10.0 * norm(engine));
}

TEST(Ledger, TrefoilCoverageAndFlags) {
    const DiscrepancyLedger l = discrepancy_ledger("3_1");
    EXPECT_EQ(l.entries.size(), 24u);
    EXPECT_EQ(l.matched_by_structure(), 24u);
    EXPECT_TRUE(l.uncovered_segments.empty());
    EXPECT_EQ(l.count(TermStatus::Unmatched), 0u);
    EXPECT_EQ(with_status(l, TermStatus::SignFlipped), (std::set<TermKey>{{1, 3}, {2, 3}}));
    EXPECT_EQ(with_status(l, TermStatus::Mismatch), (std::set<TermKey>{{2, 2}}));
    EXPECT_EQ(l.flagged(), 5u);
    // Both printed terms for segment 9 carry the opposite current direction.
    EXPECT_EQ(entry(l, 1, 3).segment, 9u);
    EXPECT_EQ(entry(l, 2, 3).segment, 9u);
    // The holonomy segment: z-parallel at (6,4).
    EXPECT_EQ(entry(l, 0, 2).segment, 10u);
    EXPECT_EQ(entry(l, 0, 2).status, TermStatus::Match);
}

TEST(Ledger, FigureEightCoverageAndFlags) {
    const DiscrepancyLedger l = discrepancy_ledger("4_1");
    EXPECT_EQ(l.entries.size(), 28u);
    EXPECT_EQ(l.matched_by_structure(), 28u);
    EXPECT_TRUE(l.uncovered_segments.empty());
    EXPECT_EQ(with_status(l, TermStatus::SignFlipped),
              (std::set<TermKey>{{0, 6}, {0, 9}, {1, 1}}));
    EXPECT_EQ(with_status(l, TermStatus::Mismatch),
              (std::set<TermKey>{{0, 7}, {1, 8}, {2, 2}, {2, 9}}));
    EXPECT_EQ(l.flagged(), 9u);
    // The By term printed without a leading sign, "{(2-x)/((2-x)^2+(10-y)^2)}[...]".
    const LedgerEntry& unsigned_term = entry(l, 1, 7);
    EXPECT_EQ(unsigned_term.status, TermStatus::Match);
    EXPECT_TRUE(unsigned_term.flagged());
    EXPECT_EQ(unsigned_term.segment, 3u);
}

TEST(Ledger, IndependentOfSeedForExactTerms) {
    for (std::uint64_t seed : {1u, 7u, 42u}) {
        const DiscrepancyLedger l = discrepancy_ledger("4_1", 10, seed);
        EXPECT_EQ(l.flagged(), 9u) << seed;
        EXPECT_EQ(l.count(TermStatus::Match), 21u) << seed;
    }
}

TEST(Ledger, GeneratedTermsMatchExactly) {
    for (const auto& k : {canonical_trefoil(), canonical_figure_eight()}) {
        const TranscribedField clean = terms_from_knot(k);
        EXPECT_EQ(clean.terms.size(), 2 * segments(k).size());
        const DiscrepancyLedger l = discrepancy_ledger(clean, k);
        EXPECT_EQ(l.flagged(), 0u) << l.to_text();
        for (const auto& p : random_complement_points(k, 10, 4, 0.5)) {
            const FieldVector a = clean.evaluate(p);
            const FieldVector b = total_field(k, p);
            EXPECT_LT(max_abs(a - b), 1e-12 * (1.0 + norm(b)));
        }
    }
}

TEST(Ledger, FaultInjectionSignFlip) {
    const LatticeKnot k = canonical_trefoil();
    TranscribedField corrupt = terms_from_knot(k);
    corrupt.terms[5].sign = -corrupt.terms[5].sign;
    const DiscrepancyLedger l = discrepancy_ledger(corrupt, k);
    EXPECT_EQ(l.flagged(), 1u);
    EXPECT_EQ(l.count(TermStatus::SignFlipped), 1u);
}

TEST(Ledger, FaultInjectionEndpoint) {
    const LatticeKnot k = canonical_figure_eight();
    TranscribedField corrupt = terms_from_knot(k);
    corrupt.terms[10].bracket[0].numerator.offset += 1.0;
    const DiscrepancyLedger l = discrepancy_ledger(corrupt, k);
    EXPECT_EQ(l.flagged(), 1u);
    EXPECT_EQ(l.count(TermStatus::Mismatch), 1u);
}

TEST(Ledger, FaultInjectionUnknownLine) {
    const LatticeKnot k = canonical_trefoil();
    TranscribedField corrupt = terms_from_knot(k);
    corrupt.terms[0].denominator[0].offset += 11.0;
    const DiscrepancyLedger l = discrepancy_ledger(corrupt, k);
    EXPECT_EQ(l.flagged(), 1u);
    EXPECT_EQ(l.count(TermStatus::Unmatched), 1u);
}

TEST(Ledger, JsonReport) {
    const auto j = nlohmann::json::parse(discrepancy_ledger("3_1").to_json());
    EXPECT_EQ(j["knot"], "3_1");
    EXPECT_EQ(j["terms"], 24);
    EXPECT_EQ(j["matched_by_denominator"], 24);
    EXPECT_EQ(j["flagged"], 5);
    EXPECT_EQ(j["entries"].size(), 24u);
}

TEST(Ledger, TextReportListsEveryTerm) {
    const std::string text = discrepancy_ledger("4_1").to_text();
    EXPECT_NE(text.find("Bx term 10"), std::string::npos);
    EXPECT_NE(text.find("Bz term 10"), std::string::npos);
    EXPECT_NE(text.find("flagged: 9"), std::string::npos);
}
