#include "mdagkit/mdag.hpp"

#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "test_util.hpp"

using namespace mdagkit;
using testutil::default_names;

TEST(Parse, Fig2iRoundTrip) {
    MDag g = MDag::parse(
        "vertices a b c d\n"
        "edge a b\nedge b c\nedge c d\n"
        "face b d\n");
    EXPECT_EQ(g, testutil::fig2i());
    EXPECT_EQ(g.facets().size(), 1u);
    EXPECT_EQ(MDag::parse(g.serialize()), g);
}

TEST(Parse, SingleVertex) {
    MDag g = MDag::parse("vertices a\n");
    EXPECT_EQ(g.size(), 1);
    EXPECT_TRUE(g.facets().empty());
}

TEST(Parse, CommentsAndBlankLines) {
    MDag g = MDag::parse(
        "# graph under test\n"
        "\n"
        "vertices a b  # trailing comment\n"
        "edge a b\n");
    EXPECT_TRUE(g.has_edge(g.index_of("a"), g.index_of("b")));
}

TEST(Parse, UndeclaredVertexInFace) {
    try {
        MDag::parse("vertices a\nface a x\n");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 2);
        EXPECT_NE(std::string(e.what()).find("undeclared vertex 'x'"), std::string::npos);
    }
}

TEST(Parse, ReportsSyntaxErrors) {
    EXPECT_THROW(MDag::parse("edge a b\n"), ParseError);          // vertices not first
    EXPECT_THROW(MDag::parse("vertices a a\n"), ParseError);      // duplicate name
    EXPECT_THROW(MDag::parse("vertices a b\nedge a\n"), ParseError);
    EXPECT_THROW(MDag::parse("vertices a b\nedge a a\n"), ParseError);
    EXPECT_THROW(MDag::parse("vertices a b\nface a a\n"), ParseError);
    EXPECT_THROW(MDag::parse("vertices a b\nfoo a b\n"), ParseError);
    EXPECT_THROW(MDag::parse("vertices a b\nvertices c\n"), ParseError);
    EXPECT_THROW(MDag::parse(""), ParseError);
}

TEST(Parse, RejectsInvalidGraphs) {
    EXPECT_THROW(MDag::parse("vertices a b\nedge a b\nedge b a\n"), ParseError);
    EXPECT_THROW(MDag::parse("vertices a b c\nface a b\nface a b c\n"), ParseError);
    EXPECT_THROW(MDag::parse("vertices a b\nedge a b\ncontext b\n"), ParseError);
}

TEST(Parse, RoundTripOnGallery) {
    for (const MDag& g : {testutil::fig1i(), testutil::fig2i(), testutil::fig2ii(),
                          testutil::fig3i(), testutil::fig3ii(), testutil::fig3iii(),
                          testutil::fig3iv(), testutil::fig5i_mdag(), testutil::fig6()})
        EXPECT_EQ(MDag::parse(g.serialize()), g);
}

TEST(Parse, RoundTripOnRandomGraphs) {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 1000; ++i) {
        int n = 2 + static_cast<int>(rng() % 5);  // up to 6 vertices
        MDag g = testutil::random_mdag(n, rng);
        EXPECT_EQ(MDag::parse(g.serialize()), g) << g.serialize();
    }
}

TEST(Validate, AcceptsFig1i) { EXPECT_TRUE(testutil::fig1i().validate().empty()); }

TEST(Validate, FlagsCycle) {
    MDag g(default_names(2));
    g.add_edge(0, 1);
    g.add_edge(1, 0);
    auto bad = g.validate();
    ASSERT_EQ(bad.size(), 1u);
    EXPECT_NE(bad[0].find("cyclic"), std::string::npos);
    EXPECT_THROW(g.topological_order(), DomainError);
}

TEST(Validate, FlagsNonMaximalFacet) {
    MDag g(default_names(3));
    g.add_facet(VSet{0, 1});
    g.add_facet(VSet{0, 1, 2});
    auto bad = g.validate();
    ASSERT_FALSE(bad.empty());
    EXPECT_NE(bad[0].find("not maximal"), std::string::npos);
}

TEST(Validate, FlagsContextViolations) {
    MDag g(default_names(3));
    g.add_edge(0, 1);
    g.add_facet(VSet{1, 2});
    g.mark_context(1);
    auto bad = g.validate();
    EXPECT_EQ(bad.size(), 2u);  // incoming edge and facet membership
}

TEST(Validate, AgreesWithTopologicalOrderAndMaximality) {
    // validate accepts iff a topological order exists and facets are maximal
    std::mt19937_64 rng(11);
    for (int i = 0; i < 500; ++i) {
        MDag g = testutil::random_mdag(2 + static_cast<int>(rng() % 4), rng);
        EXPECT_TRUE(g.validate().empty());
        EXPECT_NO_THROW(g.topological_order());
    }
}

TEST(Relations, Fig1iWorkedExample) {
    MDag g = testutil::fig1i();
    auto r = g.relations("e");
    EXPECT_EQ(r.an, g.set_of({"a", "b", "d", "e"}));
    // the facets {a,b} and {a,c,e} share a, so the district of e spans both
    EXPECT_EQ(r.dis, g.set_of({"a", "b", "c", "e"}));
    EXPECT_EQ(g.relations("a").sib, g.set_of({"b", "c", "e"}));
}

TEST(Relations, IsolatedVertex) {
    MDag g(default_names(3));
    auto r = g.relations(0);
    EXPECT_TRUE(r.pa.empty());
    EXPECT_TRUE(r.sib.empty());
    EXPECT_EQ(r.an, VSet::single(0));
    EXPECT_EQ(r.de, VSet::single(0));
    EXPECT_EQ(r.dis, VSet::single(0));
}

TEST(Relations, Fig2iDistrict) {
    MDag g = testutil::fig2i();
    EXPECT_EQ(g.relations("b").dis, g.set_of({"b", "d"}));
}

TEST(Relations, UnknownVertex) {
    EXPECT_THROW(testutil::fig2i().relations("z"), DomainError);
}

TEST(Relations, AgreeWithPathEnumerationOracle) {
    auto check = [](const MDag& g) {
        for (int v = 0; v < g.size(); ++v) {
            auto r = g.relations(v);
            EXPECT_EQ(r.an, oracles::naive_ancestors(g, v));
            EXPECT_EQ(r.de, oracles::naive_descendants(g, v));
            EXPECT_EQ(r.sib, oracles::naive_siblings(g, v));
            EXPECT_EQ(r.dis, oracles::naive_district(g, v));
        }
    };
    oracles::for_each_mdag(3, check);
    std::mt19937_64 rng(23);
    for (int i = 0; i < 1500; ++i) check(testutil::random_mdag(5, rng));
}

TEST(TopologicalOrder, Examples) {
    MDag g = testutil::fig2i();
    auto order = g.topological_order();
    std::vector<int> expect{g.index_of("a"), g.index_of("b"), g.index_of("c"),
                            g.index_of("d")};
    EXPECT_EQ(order, expect);

    MDag single(std::vector<std::string>{"v"});
    EXPECT_EQ(single.topological_order(), std::vector<int>{0});

    MDag two(std::vector<std::string>{"b", "a"});
    EXPECT_EQ(two.name(two.topological_order()[0]), "a");  // lexicographic tie-break
}

TEST(TopologicalOrder, RespectsEdges) {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 300; ++i) {
        MDag g = testutil::random_mdag(6, rng);
        auto order = g.topological_order();
        std::vector<int> pos(g.size());
        for (int k = 0; k < g.size(); ++k) pos[order[k]] = k;
        for (int v = 0; v < g.size(); ++v)
            for (int p : g.parents(v)) EXPECT_LT(pos[p], pos[v]);
    }
}

TEST(InducedSubgraph, Fig3ivTriangle) {
    MDag g = testutil::fig3iv();
    MDag h = g.induced_subgraph(g.set_of({"a", "b", "c"}));
    EXPECT_EQ(h.size(), 3);
    EXPECT_EQ(h.facets().size(), 3u);
    for (int v = 0; v < h.size(); ++v) EXPECT_TRUE(h.parents(v).empty());
}

TEST(InducedSubgraph, IdentityAndIdempotence) {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 300; ++i) {
        MDag g = testutil::random_mdag(5, rng);
        EXPECT_EQ(g.induced_subgraph(g.all()), g);
        VSet s;
        for (int v = 0; v < g.size(); ++v)
            if (rng() % 2) s.add(v);
        MDag once = g.induced_subgraph(s);
        EXPECT_EQ(once.induced_subgraph(once.all()), once);
    }
}

TEST(InducedSubgraph, Fig1iOverDF) {
    MDag g = testutil::fig1i();
    MDag h = g.induced_subgraph(g.set_of({"d", "f"}));
    ASSERT_EQ(h.facets().size(), 1u);
    EXPECT_EQ(h.facets()[0], h.set_of({"d", "f"}));
    EXPECT_TRUE(h.parents(h.index_of("f")).empty());  // d->e->f runs outside {d,f}
}

TEST(EnumerationSanity, FacetAntichainCountOnFour) {
    EXPECT_EQ(oracles::facet_antichains(4).size(), 114u);
    int mdags = 0;
    oracles::for_each_mdag(3, [&](const MDag&) { ++mdags; });
    EXPECT_EQ(mdags, 25 * 9);
}
