#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mdagkit/equivalence.hpp"
#include "mdagkit/errors.hpp"
#include "mdagkit/mdag.hpp"
#include "mdagkit/mixed_graph.hpp"
#include "mdagkit/nested.hpp"
#include "mdagkit/projection.hpp"
#include "mdagkit/separation.hpp"

namespace mdagkit {

enum class ClassTag { DagEquivalent, InequalityOnly, NonDagCi, Nested };

inline const char* class_tag_name(ClassTag t) {
    switch (t) {
        case ClassTag::DagEquivalent: return "DAG_EQUIVALENT";
        case ClassTag::InequalityOnly: return "INEQUALITY_ONLY";
        case ClassTag::NonDagCi: return "NONDAG_CI";
        case ClassTag::Nested: return "NESTED";
    }
    return "?";
}

// The four induced-subgraph shapes a locally unshielded collider path of
// length 3 can sit in, distinguished by the edge between its endpoints.
enum class ColliderPathShape { I, II, III, IV, Other };

inline const char* shape_name(ColliderPathShape s) {
    switch (s) {
        case ColliderPathShape::I: return "i";
        case ColliderPathShape::II: return "ii";
        case ColliderPathShape::III: return "iii";
        case ColliderPathShape::IV: return "iv";
        case ColliderPathShape::Other: return "other";
    }
    return "?";
}

struct Collider3Path {
    int v0, v1, v2, v3;
    ColliderPathShape shape;
};

struct DiscriminatingPath {
    std::vector<int> path;  // <a, v1..vk, b, c>
    int discriminated;      // b
};

struct FritzTriangle {
    int x, y, z;
};

struct PagBidirectedEdge {
    int x, y;
};

// CHSH instance over four binary ±1-valued variables: the settings are a and
// c, the outcomes b and d, and every distribution in the model satisfies
//   -2 <= E[bd|-+] + E[bd|+-] + E[bd|--] - E[bd|++] <= 2.
// A reduced instance was obtained through the shape (iii)/(iv) submodel
// argument; the bound then certifies an inequality for the submodel rather
// than holding verbatim over the whole model.
struct ChshInstance {
    int a, b, c, d;
    bool reduced;
    ColliderPathShape source_shape;
};

struct ESepWitness {
    VSet a, b, c, d;
};

struct ClassificationReport {
    ClassTag tag = ClassTag::DagEquivalent;
    bool decided = false;
    std::vector<NestedWitness> nested;
    std::vector<PagBidirectedEdge> pag_bidirected;
    std::vector<Collider3Path> collider_paths;
    std::vector<DiscriminatingPath> discriminating_paths;
    std::vector<ChshInstance> chsh;
    std::vector<FritzTriangle> fritz;
    std::vector<ESepWitness> esep;
    std::optional<MDag> equivalent_dag;
    std::optional<MarkedMixedGraph> pag;
};

namespace detail {
inline bool arrow_into(const MarkedMixedGraph& p, int from, int to) {
    return p.adjacent(from, to) && p.mark_at(to, from) == Mark::Arrow;
}
}  // namespace detail

// Locally unshielded collider paths <v0,v1,v2,v3>: the internal vertices
// carry arrowheads from both path edges, and v0v2, v1v3 are non-adjacent.
// Paths are reported once, oriented so that a one-sided arrowhead on the
// endpoint edge (shape iii) points at v3, with index order breaking ties.
inline std::vector<Collider3Path> find_collider_3paths(const MarkedMixedGraph& p) {
    std::vector<Collider3Path> out;
    int n = p.size();
    for (int v0 = 0; v0 < n; ++v0)
        for (int v1 : p.adjacency(v0))
            for (int v2 : p.adjacency(v1)) {
                if (v2 == v0 || p.adjacent(v0, v2)) continue;
                if (p.mark_at(v1, v0) != Mark::Arrow || p.mark_at(v1, v2) != Mark::Arrow)
                    continue;
                for (int v3 : p.adjacency(v2)) {
                    if (v3 == v0 || v3 == v1 || p.adjacent(v1, v3)) continue;
                    if (p.mark_at(v2, v1) != Mark::Arrow || p.mark_at(v2, v3) != Mark::Arrow)
                        continue;
                    ColliderPathShape shape;
                    bool keep_orientation = v0 < v3;
                    if (!p.adjacent(v0, v3)) {
                        shape = ColliderPathShape::I;
                    } else {
                        Mark at0 = p.mark_at(v0, v3);
                        Mark at3 = p.mark_at(v3, v0);
                        if (at0 == Mark::Circle && at3 == Mark::Circle)
                            shape = ColliderPathShape::II;
                        else if (at0 == Mark::Arrow && at3 == Mark::Arrow)
                            shape = ColliderPathShape::IV;
                        else if (at3 == Mark::Arrow) {
                            shape = ColliderPathShape::III;
                            keep_orientation = true;  // arrowhead already at v3
                        } else if (at0 == Mark::Arrow) {
                            shape = ColliderPathShape::III;
                            keep_orientation = false;
                        } else {
                            shape = ColliderPathShape::Other;
                        }
                    }
                    if (!keep_orientation) continue;  // reversal reported instead
                    out.push_back({v0, v1, v2, v3, shape});
                }
            }
    return out;
}

// Discriminating paths <a, v1..vk, b, c>, k >= 1: a and c non-adjacent, every
// vi a collider on the path and a parent of c.  The end vertex b is the one
// whose marks the path discriminates; its own edges are unconstrained beyond
// adjacency to c.
inline std::vector<DiscriminatingPath> find_discriminating_paths(const MarkedMixedGraph& p) {
    std::vector<DiscriminatingPath> out;
    int n = p.size();
    for (int c = 0; c < n; ++c) {
        for (int a = 0; a < n; ++a) {
            if (a == c || p.adjacent(a, c)) continue;
            std::vector<int> prefix{a};
            VSet used = VSet::single(a);
            // Every interior vertex of prefix is already a confirmed
            // collider-parent-of-c except for its forward arrowhead, which
            // each step enforces on the edge it leaves through.
            auto dfs = [&](auto&& self) -> void {
                int last = prefix.back();
                for (int w : p.adjacency(last)) {
                    if (used.contains(w) || w == c) continue;
                    // forward arrowhead completing last's collider status
                    if (prefix.size() >= 2 && p.mark_at(last, w) != Mark::Arrow) continue;
                    if (prefix.size() >= 2 && p.adjacent(w, c)) {
                        DiscriminatingPath d;
                        d.path = prefix;
                        d.path.push_back(w);
                        d.path.push_back(c);
                        d.discriminated = w;
                        out.push_back(d);
                    }
                    // extend with w as the next collider-parent vi
                    if (p.mark_at(w, last) != Mark::Arrow) continue;
                    if (!p.is_directed_edge(w, c)) continue;
                    prefix.push_back(w);
                    used.add(w);
                    self(self);
                    prefix.pop_back();
                    used.remove(w);
                }
            };
            dfs(dfs);
        }
    }
    return out;
}

// The four-vertex core every discriminating path reduces to when no locally
// unshielded collider 3-path exists: a o-> v <-> b, v -> c, c <-> b, with a-b
// and a-c non-adjacent.
struct DiscriminatingCore {
    int a, v, b, c;
    MarkedMixedGraph induced;
};

namespace detail {

inline bool matches_disc_core(const MarkedMixedGraph& p, int a, int v, int b, int c) {
    if (p.adjacent(a, b) || p.adjacent(a, c)) return false;
    if (!p.adjacent(a, v) || !p.adjacent(v, b) || !p.adjacent(v, c) || !p.adjacent(b, c))
        return false;
    return p.mark_at(a, v) == Mark::Circle && p.mark_at(v, a) == Mark::Arrow &&
           p.is_bidirected_edge(v, b) && p.is_directed_edge(v, c) &&
           p.is_bidirected_edge(b, c);
}

}  // namespace detail

// Order-reduction of a discriminating path.  When the graph has no locally
// unshielded collider 3-path but does have a discriminating path of length at
// least 3, an induced subgraph isomorphic to the core above exists; this
// finds it by scanning vertex 4-tuples, which is complete at the sizes the
// library targets.
inline std::optional<DiscriminatingCore> reduce_discriminating_path(const MarkedMixedGraph& p) {
    if (!find_collider_3paths(p).empty())
        throw DomainError("reduce_discriminating_path expects no collider 3-path");
    if (find_discriminating_paths(p).empty()) return std::nullopt;
    int n = p.size();
    for (int a = 0; a < n; ++a)
        for (int v = 0; v < n; ++v)
            for (int b = 0; b < n; ++b)
                for (int c = 0; c < n; ++c) {
                    if (a == v || a == b || a == c || v == b || v == c || b == c) continue;
                    if (!detail::matches_disc_core(p, a, v, b, c)) continue;
                    DiscriminatingCore core{a, v, b, c, MarkedMixedGraph()};
                    MarkedMixedGraph sub(
                        {p.name(a), p.name(v), p.name(b), p.name(c)});
                    auto put = [&](int x, int y) {
                        if (p.adjacent(x, y))
                            sub.set_edge(sub.index_of(p.name(x)), sub.index_of(p.name(y)),
                                         p.mark_at(x, y), p.mark_at(y, x));
                    };
                    put(a, v); put(a, b); put(a, c); put(v, b); put(v, c); put(b, c);
                    core.induced = sub;
                    return core;
                }
    return std::nullopt;
}

// Fritz triangles: three vertices pairwise joined through bidirected facets,
// with no directed edge among them and no single face containing all three.
inline std::vector<FritzTriangle> find_fritz_triangles(const MDag& g) {
    std::vector<FritzTriangle> out;
    int n = g.size();
    for (int x = 0; x < n; ++x)
        for (int y = x + 1; y < n; ++y)
            for (int z = y + 1; z < n; ++z) {
                if (!g.siblings(x).contains(y) || !g.siblings(x).contains(z) ||
                    !g.siblings(y).contains(z))
                    continue;
                VSet triple{x, y, z};
                bool joint_face = false;
                for (VSet f : g.facets())
                    if (triple.subset_of(f)) { joint_face = true; break; }
                if (joint_face) continue;
                bool directed = g.has_edge(x, y) || g.has_edge(y, x) || g.has_edge(x, z) ||
                                g.has_edge(z, x) || g.has_edge(y, z) || g.has_edge(z, y);
                if (directed) continue;
                out.push_back({x, y, z});
            }
    return out;
}

// Bounded search for e-separation witnesses that certify an inequality:
// vertex pairs that no conditioning set can m-separate, yet become separated
// once some small D is deleted (the generalized instrumental pattern).  Only
// pairs are searched: a set-level e-separation containing an inseparable
// pair decomposes to that pair's witness, and sets whose pairs are all
// separable can be jointly inseparable even in plain DAG models, where no
// inequality exists.
inline std::vector<ESepWitness> find_esep_witnesses(const MDag& g, int max_d = 2) {
    std::vector<ESepWitness> out;
    SepGraph s = SepGraph::from(g);
    int n = g.size();
    for (int a = 0; a < n; ++a) {
        VSet linked = s.children[a] | s.parents[a] | s.siblings[a];
        for (int b = a + 1; b < n; ++b) {
            if (linked.contains(b)) continue;  // a direct edge survives any deletion
            VSet va = VSet::single(a);
            VSet vb = VSet::single(b);
            VSet rest = g.all() - va - vb;
            bool separable = false;
            for_each_subset(rest, [&](VSet c) {
                if (!separable && !s.connected(va, vb, c)) separable = true;
            });
            if (separable) continue;
            std::vector<VSet> ds;
            for_each_subset(rest, [&](VSet d) {
                if (!d.empty() && d.count() <= max_d) ds.push_back(d);
            });
            std::sort(ds.begin(), ds.end(), [](VSet x, VSet y) {
                return std::pair(x.count(), x.bits()) < std::pair(y.count(), y.bits());
            });
            bool done = false;
            for (VSet d : ds) {
                if (done) break;
                for_each_subset(rest - d, [&](VSet c) {
                    if (done) return;
                    if (e_separated(g, va, vb, c, d)) {
                        out.push_back({va, vb, c, d});
                        done = true;
                    }
                });
            }
        }
    }
    return out;
}

// Theorem-level decision procedure.  Witness search order: nested
// constraints, then an invariant bidirected PAG edge (with collider-path /
// discriminating-path inequality witnesses), then Fritz triangles and
// e-separation witnesses.  When nothing fires the graph is reported
// DAG-equivalent with decided=false, since the absence of the searched
// witnesses does not prove equivalence unless the graph already is a DAG.
inline ClassificationReport classify(const MDag& g, int max_edges = 12) {
    auto bad = g.validate();
    if (!bad.empty()) throw DomainError("classify expects a valid graph: " + bad.front());
    if (!g.context().empty()) throw DomainError("classify expects no context vertices");

    ClassificationReport rep;
    rep.nested = find_nested_constraints(g);
    if (!rep.nested.empty()) {
        rep.tag = ClassTag::Nested;
        rep.decided = true;
        return rep;
    }

    EquivalenceClass cls = enumerate_class(mag_project(g), max_edges);
    rep.pag = cls.pag;
    auto bidirected = bidirected_edges(cls.pag);
    if (!bidirected.empty()) {
        rep.tag = ClassTag::NonDagCi;
        rep.decided = true;
        for (auto [x, y] : bidirected) rep.pag_bidirected.push_back({x, y});
        rep.collider_paths = find_collider_3paths(cls.pag);
        for (const auto& cp : rep.collider_paths) {
            bool direct = cp.shape == ColliderPathShape::I || cp.shape == ColliderPathShape::II;
            bool reducible =
                cp.shape == ColliderPathShape::III || cp.shape == ColliderPathShape::IV;
            if (direct || reducible)
                rep.chsh.push_back({cp.v0, cp.v1, cp.v3, cp.v2, reducible, cp.shape});
        }
        if (rep.collider_paths.empty()) {
            rep.discriminating_paths = find_discriminating_paths(cls.pag);
            if (auto core = reduce_discriminating_path(cls.pag))
                rep.esep.push_back({VSet::single(core->a),
                                    VSet::single(core->b) | VSet::single(core->c), VSet(),
                                    VSet::single(core->v)});
        }
        return rep;
    }

    rep.fritz = find_fritz_triangles(g);
    if (!rep.fritz.empty()) {
        rep.tag = ClassTag::InequalityOnly;
        rep.decided = true;
        return rep;
    }

    rep.esep = find_esep_witnesses(g);
    if (!rep.esep.empty()) {
        rep.tag = ClassTag::InequalityOnly;
        rep.decided = true;
        return rep;
    }

    rep.tag = ClassTag::DagEquivalent;
    rep.decided = g.facets().empty();
    rep.equivalent_dag = ci_dag_representable(g, max_edges);
    return rep;
}

// Renders a witness as a machine-checkable constraint description.
inline std::string emit_witness(const MDag& g, const NestedWitness& w) {
    std::string sig;
    for (int v : w.sigma) {
        if (!sig.empty()) sig += ",";
        sig += g.name(v);
    }
    return "X" + g.set_to_string(w.a) + " _||_ X" + g.set_to_string(w.b) + " | X" +
           g.set_to_string(w.c) + " after fixing [" + sig + "]";
}

inline std::string emit_witness(const MDag& g, const ChshInstance& w) {
    auto n = [&](int v) { return g.name(v); };
    std::string head = "-2 <= E[" + n(w.b) + n(w.d) + "|-+] + E[" + n(w.b) + n(w.d) +
                       "|+-] + E[" + n(w.b) + n(w.d) + "|--] - E[" + n(w.b) + n(w.d) +
                       "|++] <= 2 with settings (" + n(w.a) + "," + n(w.c) + ")";
    if (w.reduced) head += " [via Fritz reduction, shape " + std::string(shape_name(w.source_shape)) + "]";
    return head;
}

inline std::string emit_witness(const MDag& g, const ESepWitness& w) {
    return "X" + g.set_to_string(w.a) + " _||_e X" + g.set_to_string(w.b) + " | X" +
           g.set_to_string(w.c) + " after deleting " + g.set_to_string(w.d);
}

inline std::string emit_witness(const MDag& g, const FritzTriangle& w) {
    return "Fritz triangle " + g.set_to_string(VSet{w.x, w.y, w.z});
}

}  // namespace mdagkit
