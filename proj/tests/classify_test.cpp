#include "mdagkit/classify.hpp"

#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "test_util.hpp"

using namespace mdagkit;
using testutil::default_names;

namespace {

// The four collider-path shapes, built directly as marked graphs.
MarkedMixedGraph shape_pag(ColliderPathShape shape) {
    MarkedMixedGraph p(default_names(4));
    int a = 0, b = 1, c = 2, d = 3;
    p.add_bidirected(b, c);
    switch (shape) {
        case ColliderPathShape::I:
            p.set_edge(a, b, Mark::Circle, Mark::Arrow);
            p.set_edge(d, c, Mark::Circle, Mark::Arrow);
            break;
        case ColliderPathShape::II:
            p.set_edge(a, b, Mark::Circle, Mark::Arrow);
            p.set_edge(d, c, Mark::Circle, Mark::Arrow);
            p.set_edge(a, d, Mark::Circle, Mark::Circle);
            break;
        case ColliderPathShape::III:
            p.set_edge(a, b, Mark::Circle, Mark::Arrow);
            p.add_bidirected(c, d);
            p.set_edge(a, d, Mark::Circle, Mark::Arrow);
            break;
        default:  // IV
            p.add_bidirected(a, b);
            p.add_bidirected(c, d);
            p.add_bidirected(a, d);
            break;
    }
    return p;
}

}  // namespace

TEST(Collider3Paths, ShapeGallery) {
    // shapes iii and iv are symmetric enough to contain several collider
    // paths; every one must carry the same shape tag
    struct Expectation { ColliderPathShape shape; std::size_t count; };
    for (Expectation e : {Expectation{ColliderPathShape::I, 1},
                          Expectation{ColliderPathShape::II, 1},
                          Expectation{ColliderPathShape::III, 2},
                          Expectation{ColliderPathShape::IV, 4}}) {
        MarkedMixedGraph p = shape_pag(e.shape);
        auto found = find_collider_3paths(p);
        ASSERT_EQ(found.size(), e.count) << shape_name(e.shape);
        for (const auto& cp : found) EXPECT_EQ(cp.shape, e.shape);
    }
}

TEST(Collider3Paths, ChainPagHasNone) {
    MarkedMixedGraph p(default_names(3));
    p.set_edge(0, 1, Mark::Circle, Mark::Circle);
    p.set_edge(1, 2, Mark::Circle, Mark::Circle);
    EXPECT_TRUE(find_collider_3paths(p).empty());
}

TEST(Collider3Paths, Fig3ClassPagHasNone) {
    EXPECT_TRUE(find_collider_3paths(build_pag(testutil::fig3iii())).empty());
}

TEST(Collider3Paths, BellPagHasShapeI) {
    MarkedMixedGraph pag = build_pag(testutil::bell_mdag());
    auto found = find_collider_3paths(pag);
    ASSERT_EQ(found.size(), 1u);
    EXPECT_EQ(found[0].shape, ColliderPathShape::I);
    EXPECT_EQ(pag.name(found[0].v0), "a");
    EXPECT_EQ(pag.name(found[0].v1), "b");
    EXPECT_EQ(pag.name(found[0].v2), "d");
    EXPECT_EQ(pag.name(found[0].v3), "c");
}

TEST(DiscriminatingPaths, Fig5iCore) {
    MarkedMixedGraph p = testutil::fig5i_pag();
    auto found = find_discriminating_paths(p);
    ASSERT_EQ(found.size(), 1u);
    EXPECT_EQ(found[0].path.size(), 4u);
    EXPECT_EQ(p.name(found[0].path[0]), "a");
    EXPECT_EQ(p.name(found[0].path[1]), "v");
    EXPECT_EQ(p.name(found[0].discriminated), "b");
    EXPECT_EQ(p.name(found[0].path.back()), "c");
}

namespace {

// fig5(ii) with k = 2 plus the directed shield v1 -> b that kills the
// collider 3-paths: the length-4 discriminating path survives and the
// fig5(i) core appears on {a, v1, v2, b}.
MarkedMixedGraph shielded_k2_pag() {
    MarkedMixedGraph p({"a", "b", "c", "v1", "v2"});
    int a = p.index_of("a"), b = p.index_of("b"), c = p.index_of("c");
    int v1 = p.index_of("v1"), v2 = p.index_of("v2");
    p.set_edge(a, v1, Mark::Circle, Mark::Arrow);
    p.add_bidirected(v1, v2);
    p.add_bidirected(v2, b);
    p.add_bidirected(b, c);
    p.add_directed(v1, c);
    p.add_directed(v2, c);
    p.add_directed(v1, b);  // shield
    return p;
}

}  // namespace

TEST(DiscriminatingPaths, LengthFourConfiguration) {
    MarkedMixedGraph p = shielded_k2_pag();
    auto found = find_discriminating_paths(p);
    bool has_len4 = false;
    for (const auto& d : found)
        if (d.path.size() == 5) has_len4 = true;
    EXPECT_TRUE(has_len4);
}

TEST(DiscriminatingPaths, TreeShapedPagHasNone) {
    MarkedMixedGraph p(default_names(4));
    p.set_edge(0, 1, Mark::Circle, Mark::Circle);
    p.set_edge(0, 2, Mark::Circle, Mark::Circle);
    p.set_edge(0, 3, Mark::Circle, Mark::Circle);
    EXPECT_TRUE(find_discriminating_paths(p).empty());
}

TEST(ReduceDiscriminatingPath, Fig5iIsItsOwnCore) {
    MarkedMixedGraph p = testutil::fig5i_pag();
    auto core = reduce_discriminating_path(p);
    ASSERT_TRUE(core.has_value());
    EXPECT_EQ(p.name(core->a), "a");
    EXPECT_EQ(p.name(core->v), "v");
    EXPECT_EQ(p.name(core->b), "b");
    EXPECT_EQ(p.name(core->c), "c");
}

TEST(ReduceDiscriminatingPath, ShieldedK2ReducesToCore) {
    MarkedMixedGraph p = shielded_k2_pag();
    ASSERT_TRUE(find_collider_3paths(p).empty());
    auto core = reduce_discriminating_path(p);
    ASSERT_TRUE(core.has_value());
    EXPECT_EQ(p.name(core->a), "a");
    EXPECT_EQ(p.name(core->v), "v1");
    EXPECT_EQ(p.name(core->b), "v2");
    EXPECT_EQ(p.name(core->c), "b");
}

TEST(ReduceDiscriminatingPath, NoStructureGivesNull) {
    MarkedMixedGraph p(default_names(3));
    p.set_edge(0, 1, Mark::Circle, Mark::Circle);
    EXPECT_FALSE(reduce_discriminating_path(p).has_value());
}

TEST(ReduceDiscriminatingPath, RejectsColliderPathInput) {
    EXPECT_THROW(reduce_discriminating_path(shape_pag(ColliderPathShape::I)), DomainError);
}

TEST(FritzTriangles, Gallery) {
    auto found = find_fritz_triangles(testutil::fig3iv());
    ASSERT_EQ(found.size(), 1u);
    MDag g = testutil::fig3iv();
    EXPECT_EQ(g.name(found[0].x), "a");
    EXPECT_EQ(g.name(found[0].y), "b");
    EXPECT_EQ(g.name(found[0].z), "c");

    EXPECT_TRUE(find_fritz_triangles(testutil::fig3i()).empty());  // joint face
    EXPECT_TRUE(find_fritz_triangles(testutil::fig3iii()).empty());
}

TEST(Classify, Fig2iNested) {
    MDag g = testutil::fig2i();
    ClassificationReport rep = classify(g);
    EXPECT_EQ(rep.tag, ClassTag::Nested);
    EXPECT_TRUE(rep.decided);
    NestedWitness expect{{g.index_of("c")}, g.set_of({"a"}), g.set_of({"d"}),
                         g.set_of({"c"})};
    bool found = false;
    for (const auto& w : rep.nested)
        if (w == expect) found = true;
    EXPECT_TRUE(found);
}

TEST(Classify, BellStructureNonDagCi) {
    MDag g = testutil::bell_mdag();
    ClassificationReport rep = classify(g);
    EXPECT_EQ(rep.tag, ClassTag::NonDagCi);
    EXPECT_TRUE(rep.decided);
    ASSERT_FALSE(rep.pag_bidirected.empty());
    ASSERT_FALSE(rep.chsh.empty());
    const ChshInstance& chsh = rep.chsh.front();
    EXPECT_EQ(g.name(chsh.a), "a");
    EXPECT_EQ(g.name(chsh.b), "b");
    EXPECT_EQ(g.name(chsh.c), "c");
    EXPECT_EQ(g.name(chsh.d), "d");
    EXPECT_FALSE(chsh.reduced);
}

TEST(Classify, Fig5iMdagNonDagCiWithESepWitness) {
    MDag g = testutil::fig5i_mdag();
    ClassificationReport rep = classify(g);
    EXPECT_EQ(rep.tag, ClassTag::NonDagCi);
    ASSERT_TRUE(rep.pag.has_value());
    EXPECT_EQ(*rep.pag, testutil::fig5i_pag());
    EXPECT_TRUE(rep.collider_paths.empty());
    ASSERT_FALSE(rep.esep.empty());
    EXPECT_EQ(rep.esep[0].a, g.set_of({"a"}));
    EXPECT_EQ(rep.esep[0].b, g.set_of({"b", "c"}));
    EXPECT_TRUE(rep.esep[0].c.empty());
    EXPECT_EQ(rep.esep[0].d, g.set_of({"v"}));
    // the reported witness is a true e-separation
    EXPECT_TRUE(e_separated(g, rep.esep[0].a, rep.esep[0].b, rep.esep[0].c, rep.esep[0].d));
}

TEST(Classify, Fig3ivInequalityOnly) {
    ClassificationReport rep = classify(testutil::fig3iv());
    EXPECT_EQ(rep.tag, ClassTag::InequalityOnly);
    ASSERT_EQ(rep.fritz.size(), 1u);
}

TEST(Classify, Fig3iAndIiDagEquivalent) {
    for (const MDag& g : {testutil::fig3i(), testutil::fig3ii()}) {
        ClassificationReport rep = classify(g);
        EXPECT_EQ(rep.tag, ClassTag::DagEquivalent);
        EXPECT_FALSE(rep.decided);
        ASSERT_TRUE(rep.equivalent_dag.has_value());
        EXPECT_TRUE(markov_equivalent(mag_project(*rep.equivalent_dag),
                                      mag_project(testutil::fig3iii())));
    }
}

TEST(Classify, PlainDagDecided) {
    ClassificationReport rep = classify(testutil::fig3iii());
    EXPECT_EQ(rep.tag, ClassTag::DagEquivalent);
    EXPECT_TRUE(rep.decided);
    ASSERT_TRUE(rep.equivalent_dag.has_value());
}

TEST(Classify, InstrumentalVariableInequalityOnly) {
    // a -> b -> c with b <-> c: no nested constraint, clean PAG, no Fritz
    // triangle, but deleting b e-separates a from c.
    MDag g(default_names(3));
    g.add_edge(0, 1);
    g.add_edge(1, 2);
    g.add_facet(VSet{1, 2});
    ClassificationReport rep = classify(g);
    EXPECT_EQ(rep.tag, ClassTag::InequalityOnly);
    ASSERT_FALSE(rep.esep.empty());
    EXPECT_EQ(rep.esep[0].a, VSet::single(0));
    EXPECT_EQ(rep.esep[0].b, VSet::single(2));
    EXPECT_EQ(rep.esep[0].d, VSet::single(1));
}

TEST(Classify, RejectsContextAndInvalid) {
    EXPECT_THROW(classify(testutil::fig2ii()), DomainError);
}

TEST(Classify, ReportInvariantsOnRandomGraphs) {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 60; ++i) {
        MDag g = testutil::random_mdag(4, rng);
        ClassificationReport rep = classify(g);
        switch (rep.tag) {
            case ClassTag::Nested: EXPECT_FALSE(rep.nested.empty()); break;
            case ClassTag::NonDagCi: EXPECT_FALSE(rep.pag_bidirected.empty()); break;
            case ClassTag::InequalityOnly:
                EXPECT_TRUE(!rep.fritz.empty() || !rep.esep.empty());
                break;
            case ClassTag::DagEquivalent:
                EXPECT_TRUE(rep.equivalent_dag.has_value());
                EXPECT_EQ(rep.decided, g.facets().empty());
                break;
        }
    }
}

TEST(EmitWitness, Renders) {
    MDag g = testutil::fig2i();
    NestedWitness w{{g.index_of("c")}, g.set_of({"d"}), g.set_of({"a"}), g.set_of({"c"})};
    EXPECT_EQ(emit_witness(g, w), "X{d} _||_ X{a} | X{c} after fixing [c]");

    ChshInstance chsh{g.index_of("a"), g.index_of("b"), g.index_of("c"), g.index_of("d"),
                      false, ColliderPathShape::I};
    EXPECT_NE(emit_witness(g, chsh).find("<= 2"), std::string::npos);

    MDag core = testutil::fig5i_mdag();
    ESepWitness e{core.set_of({"a"}), core.set_of({"b", "c"}), VSet(), core.set_of({"v"})};
    EXPECT_EQ(emit_witness(core, e), "X{a} _||_e X{b,c} | X{} after deleting {v}");

    FritzTriangle f{0, 1, 2};
    EXPECT_EQ(emit_witness(g, f), "Fritz triangle {a,b,c}");
}
