#include "knotfield/errors.hpp"
#include "knotfield/verification.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <cmath>

using namespace knotfield;

TEST(SeededRandom, ReproducibleStream) {
    SeededRandom a(9);
    SeededRandom b(9);
    for (int i = 0; i < 100; ++i) {
        const double u = a.uniform();
        EXPECT_EQ(u, b.uniform());
        EXPECT_GE(u, 0.0);
        EXPECT_LT(u, 1.0);
    }
    SeededRandom c(0);
    for (int i = 0; i < 1000; ++i) {
        const auto v = c.integer(-2, 3);
        EXPECT_GE(v, -2);
        EXPECT_LE(v, 3);
    }
}

TEST(RandomLoops, ClearanceAndDeterminism) {
    const LatticeKnot t = canonical_trefoil();
    const auto a = random_rectangular_loops(t, 12, 3);
    const auto b = random_rectangular_loops(t, 12, 3);
    ASSERT_EQ(a.size(), 12u);
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].vertices, b[i].vertices);
        EXPECT_GE(loop_clearance(t, a[i]), 0.5);
    }
    std::size_t linked = 0;
    for (const auto& l : a) {
        linked += linking_number(t, l) != 0 ? 1 : 0;
    }
    EXPECT_GE(linked, 3u);
}

TEST(RandomPoints, Clearance) {
    const LatticeKnot f = canonical_figure_eight();
    const KnotField field(f);
    for (const auto& p : random_complement_points(f, 100, 1, 1.0)) {
        EXPECT_GE(field.clearance(p), 1.0);
    }
}

TEST(FiniteDifference, CurlAndDivergenceVanish) {
    const KnotField field(canonical_trefoil());
    const auto probe = probe_derivatives(field, {5, 3, 2});
    EXPECT_GT(probe.scale, 0.0);
    EXPECT_LT(norm(probe.curl) / probe.scale, 1e-5);
    EXPECT_LT(std::fabs(probe.divergence) / probe.scale, 1e-5);
}

TEST(Suites, KernelAgreement) {
    const SuiteResult r = suite_closed_form_vs_quadrature(200, 5);
    EXPECT_TRUE(r.pass);
    EXPECT_EQ(r.cases, 200u);
    EXPECT_LT(r.worst, 1e-8);
}

TEST(Suites, FlatnessAndScaling) {
    const LatticeKnot f = canonical_figure_eight();
    for (const auto& s : suite_flatness(f, 50, 2)) {
        EXPECT_TRUE(s.pass) << s.name;
    }
    EXPECT_TRUE(suite_field_scaling(f, 30, 2, 3).pass);
}

TEST(Suites, HolonomyLinkingAndScaling) {
    const LatticeKnot t = canonical_trefoil();
    const auto loops = random_rectangular_loops(t, 8, 4);
    EXPECT_TRUE(suite_holonomy_linking(t, loops).pass);
    EXPECT_TRUE(suite_holonomy_scaling(t, loops, 3).pass);
}

TEST(Suites, HolonomyLinkingCatchesWrongPrefactorUse) {
    // Loops around a knot with k = 2 must still compare against 4 pi k Lk.
    const LatticeKnot t = canonical_trefoil().with_prefactor(2.0);
    EXPECT_TRUE(suite_holonomy_linking(t, random_rectangular_loops(t, 6, 8)).pass);
}

TEST(Report, JsonShape) {
    VerificationOptions opt;
    opt.kernel_pairs = 20;
    opt.flatness_points = 10;
    opt.scaling_points = 10;
    opt.loops = 4;
    const VerificationReport r = run_verification(canonical_trefoil(), opt);
    EXPECT_TRUE(r.pass());
    const auto j = nlohmann::json::parse(r.to_json());
    EXPECT_EQ(j["knot"], "3_1");
    EXPECT_EQ(j["pass"], true);
    ASSERT_EQ(j["suites"].size(), 6u);
    EXPECT_EQ(j["suites"][0]["name"], "closed_form_vs_quadrature");
    EXPECT_EQ(r.to_json(), run_verification(canonical_trefoil(), opt).to_json());
}

TEST(Report, RejectsInvalidKnot) {
    const LatticeKnot bad({{0, 0, 0}, {2, 0, 0}, {2, 2, 0}}, "bad");
    EXPECT_THROW(run_verification(bad, {}), InvalidKnotError);
}
