#include "mdagkit/nested.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "oracles.hpp"
#include "test_util.hpp"

using namespace mdagkit;
using testutil::default_names;

TEST(FixGraph, Fig2iFixCGivesFig2ii) {
    MDag g = testutil::fig2i();
    EXPECT_EQ(fix_graph(g, "c"), testutil::fig2ii());
}

TEST(FixGraph, Fig1iFixEGivesFig6) {
    MDag g = testutil::fig1i();
    EXPECT_EQ(fix_graph(g, "e"), testutil::fig6());
}

TEST(FixGraph, SourceVertexOnlyGainsContextMark) {
    MDag g = testutil::fig3iii();  // a has no incoming edges or facets
    MDag fixed = fix_graph(g, "a");
    EXPECT_EQ(fixed.context(), g.set_of({"a"}));
    for (int v = 0; v < g.size(); ++v) EXPECT_EQ(fixed.parents(v), g.parents(v));
    EXPECT_EQ(fixed.facets(), g.facets());
}

TEST(FixGraph, Errors) {
    MDag g = testutil::fig2i();
    EXPECT_THROW(fix_graph(g, "b"), DomainError);  // not fixable
    MDag fixed = fix_graph(g, "c");
    EXPECT_THROW(fix_graph(fixed, "c"), DomainError);  // already context
}

TEST(FixGraph, MatchesEdgeFormulas) {
    // directed part D ∩ (V x (V\{v})), faces B ∩ P(V\{v}) re-maximalized
    std::mt19937_64 rng(3);
    for (int i = 0; i < 500; ++i) {
        MDag g = testutil::random_mdag(5, rng);
        for (int v : g.random_vertices()) {
            if (!is_fixable(g, v)) continue;
            MDag fixed = fix_graph(g, v);
            for (int w = 0; w < g.size(); ++w)
                EXPECT_EQ(fixed.parents(w), w == v ? VSet() : g.parents(w));
            MDag expect(g.vertex_names());
            for (VSet f : g.facets()) expect.add_facet(f - VSet::single(v));
            expect.normalize_facets();
            EXPECT_EQ(fixed.facets(), expect.facets());
        }
    }
}

TEST(ReachableGraphs, Fig2iIncludesFixC) {
    auto reach = reachable_graphs(testutil::fig2i());
    MDag fig2ii = testutil::fig2ii();
    bool found = false;
    for (const auto& r : reach)
        if (r.graph == fig2ii) {
            EXPECT_EQ(r.sigma, std::vector<int>{testutil::fig2i().index_of("c")});
            found = true;
        }
    EXPECT_TRUE(found);
}

TEST(ReachableGraphs, Fig1iIncludesFixE) {
    auto reach = reachable_graphs(testutil::fig1i());
    MDag fig6 = testutil::fig6();
    bool found = false;
    for (const auto& r : reach)
        if (r.graph == fig6) found = true;
    EXPECT_TRUE(found);
}

TEST(ReachableGraphs, PlainDagReachesAllSubsets) {
    MDag g(default_names(3));
    g.add_edge(0, 1);
    g.add_edge(1, 2);
    auto reach = reachable_graphs(g);
    EXPECT_EQ(reach.size(), 8u);  // every context subset, deduplicated
}

TEST(ReachableGraphs, DepthCap) {
    MDag g(default_names(3));
    auto reach = reachable_graphs(g, 1);
    EXPECT_EQ(reach.size(), 4u);  // root plus three single fixings
}

TEST(NestedConstraints, Fig2iVermaWitness) {
    MDag g = testutil::fig2i();
    auto witnesses = find_nested_constraints(g);
    ASSERT_FALSE(witnesses.empty());
    NestedWitness expect{{g.index_of("c")}, g.set_of({"a"}), g.set_of({"d"}),
                         g.set_of({"c"})};
    EXPECT_NE(std::find(witnesses.begin(), witnesses.end(), expect), witnesses.end());
    // the unconditional variant is also nested and reported
    NestedWitness expect2{{g.index_of("c")}, g.set_of({"a"}), g.set_of({"d"}), VSet()};
    EXPECT_NE(std::find(witnesses.begin(), witnesses.end(), expect2), witnesses.end());
}

TEST(NestedConstraints, Fig1iWitness) {
    MDag g = testutil::fig1i();
    auto witnesses = find_nested_constraints(g);
    NestedWitness expect{{g.index_of("e")}, g.set_of({"b"}), g.set_of({"f"}),
                         g.set_of({"e"})};
    EXPECT_NE(std::find(witnesses.begin(), witnesses.end(), expect), witnesses.end());
}

TEST(NestedConstraints, DagsHaveNone) {
    EXPECT_TRUE(find_nested_constraints(testutil::fig3iii()).empty());
    std::mt19937_64 rng(11);
    for (int i = 0; i < 100; ++i) {
        MDag g = testutil::random_mdag(5, rng, 0.4, 0);
        EXPECT_TRUE(find_nested_constraints(g).empty()) << g.serialize();
    }
}

TEST(NestedConstraints, EquivalenceGalleryHasNone) {
    // fig3 graphs are ordinary Markov equivalent to a DAG and carry no
    // nested constraint
    EXPECT_TRUE(find_nested_constraints(testutil::fig3i()).empty());
    EXPECT_TRUE(find_nested_constraints(testutil::fig3ii()).empty());
    EXPECT_TRUE(find_nested_constraints(testutil::fig3iv()).empty());
    EXPECT_TRUE(find_nested_constraints(testutil::bell_mdag()).empty());
}

TEST(NestedConstraints, WitnessesFailInOriginalGraph) {
    MDag g = testutil::fig2i();
    for (const auto& w : find_nested_constraints(g))
        EXPECT_FALSE(m_separated(g, w.a, w.b, w.c));
}

TEST(NestedConstraints, RejectsContextInput) {
    EXPECT_THROW(find_nested_constraints(testutil::fig2ii()), DomainError);
}

TEST(DetectNoDag, FiresOnFixedFig2ii) {
    GraphCIModel model(testutil::fig2ii());
    auto hit = detect_nondag_pattern(model);
    ASSERT_TRUE(hit.has_value());
    // the returned tuple satisfies the pattern it claims
    EXPECT_TRUE(model.independent(VSet::single(hit->v), VSet::single(hit->s), VSet()));
    EXPECT_TRUE(model.independent(VSet::single(hit->a), VSet::single(hit->b), hit->d));
    EXPECT_FALSE(model.independent(VSet::single(hit->a), VSet::single(hit->b),
                                   hit->d | VSet::single(hit->s)));
    bool v_in_ab = hit->v == hit->a || hit->v == hit->b;
    EXPECT_TRUE(v_in_ab || hit->d.contains(hit->v));
}

TEST(DetectNoDag, EmptyModelAndChainDagGiveNone) {
    ListCIModel empty(3, {});
    EXPECT_FALSE(detect_nondag_pattern(empty).has_value());

    MDag chain(default_names(3));
    chain.add_edge(0, 1);
    chain.add_edge(1, 2);
    GraphCIModel model(chain);
    EXPECT_FALSE(detect_nondag_pattern(model).has_value());
}

TEST(DetectNoDag, SilentOnFaithfulDagModels) {
    // Any DAG's own separation model must never trigger the certificate.
    std::mt19937_64 rng(13);
    for (int i = 0; i < 200; ++i) {
        MDag g = testutil::random_mdag(5, rng, 0.4, 0);
        GraphCIModel model(g);
        EXPECT_FALSE(detect_nondag_pattern(model).has_value()) << g.serialize();
    }
}

TEST(DetectNoDag, ListModelMatchesUpToSymmetry) {
    // c _||_ b, a _||_ d | c, and nothing else
    MDag g = testutil::fig2ii();
    ListCIModel model(4, {{VSet::single(2), VSet::single(1), VSet()},
                          {VSet::single(0), VSet::single(3), VSet::single(2)}});
    EXPECT_TRUE(model.independent(VSet::single(1), VSet::single(2), VSet()));
    EXPECT_FALSE(model.independent(VSet::single(0), VSet::single(3), VSet()));
    (void)g;
}

// Embodiment of the nested-constraints-are-not-DAG-like proposition at small
// scale; the 4-vertex exhaustive run lives in the acceptance suite.
TEST(DetectNoDag, FiresAfterFixingWheneverNestedConstraintsExist3) {
    oracles::for_each_mdag(3, [](const MDag& g) {
        auto witnesses = find_nested_constraints(g);
        if (witnesses.empty()) return;
        MDag fixed = g;
        for (int v : witnesses.front().sigma) fixed = fix_graph(fixed, v);
        GraphCIModel model(fixed);
        EXPECT_TRUE(detect_nondag_pattern(model).has_value()) << g.serialize();
    });
}
