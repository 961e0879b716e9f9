#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mdagkit/errors.hpp"
#include "mdagkit/mdag.hpp"
#include "mdagkit/separation.hpp"
#include "mdagkit/vertex_set.hpp"

namespace mdagkit {

// Fixes v: drops every edge with an arrowhead at v (directed edges into v and
// all facet memberships of v), keeps edges out of v, and moves v to the
// context set.  The surviving faces are re-maximalized.
inline MDag fix_graph(const MDag& g, int v) {
    if (v < 0 || v >= g.size()) throw DomainError("unknown vertex");
    if (g.context().contains(v))
        throw DomainError("vertex '" + g.name(v) + "' is already fixed");
    if (!is_fixable(g, v))
        throw DomainError("vertex '" + g.name(v) + "' is not fixable");
    MDag out(g.vertex_names());
    for (int w = 0; w < g.size(); ++w) {
        if (w == v) continue;
        for (int p : g.parents(w)) out.add_edge(p, w);
    }
    for (VSet f : g.facets()) out.add_facet(f - VSet::single(v));
    out.normalize_facets();
    for (int w : g.context()) out.mark_context(w);
    out.mark_context(v);
    return out;
}

inline MDag fix_graph(const MDag& g, const std::string& v) {
    return fix_graph(g, g.index_of(v));
}

struct ReachableGraph {
    std::vector<int> sigma;  // fixing sequence, in order applied
    MDag graph;
};

// Breadth-first closure of the fixing operation.  Graphs equal as marked
// mDAGs (including context marks) are visited once, via the first sequence
// found; sequences are expanded in vertex-index order, so the result is
// deterministic.  max_depth < 0 means no bound.
inline std::vector<ReachableGraph> reachable_graphs(const MDag& g, int max_depth = -1) {
    std::vector<ReachableGraph> out;
    std::map<std::string, bool> seen;
    std::vector<ReachableGraph> frontier{{{}, g}};
    seen[g.serialize()] = true;
    out.push_back(frontier.front());
    int depth = 0;
    while (!frontier.empty() && (max_depth < 0 || depth < max_depth)) {
        std::vector<ReachableGraph> next;
        for (const auto& item : frontier) {
            for (int v : item.graph.random_vertices()) {
                if (!is_fixable(item.graph, v)) continue;
                ReachableGraph r{item.sigma, fix_graph(item.graph, v)};
                r.sigma.push_back(v);
                std::string key = r.graph.serialize();
                if (seen.count(key)) continue;
                seen[key] = true;
                out.push_back(r);
                next.push_back(std::move(r));
            }
        }
        frontier = std::move(next);
        ++depth;
    }
    return out;
}

// A conditional independence that appears only after the fixings in sigma:
// A and B are m-separated given C in the fixed graph, while in the original
// graph no conditioning set whatsoever separates them.  The inseparability
// requirement is what makes the constraint genuinely new; the weaker sweep
// over conditioning sets near C admits separations that plain path deletion
// already explains, and fires on ordinary DAGs.
struct NestedWitness {
    std::vector<int> sigma;
    VSet a, b, c;

    bool operator==(const NestedWitness&) const = default;
};

// All nested constraints of g, over every reachable fixing sequence.
//
// Witnesses carry singleton A, B.  This is the inclusion-minimal form: an
// m-separation of sets decomposes into pairwise separations under the same
// conditioning set, so any set-level witness with an inseparable pair is
// dominated by that pair's witness, while a set whose pairs are all
// separable in g owes its joint separation to path deletion alone (vertex
// sets can be jointly inseparable in a plain DAG, and fixing then separates
// them without adding model content).  C is reported as found, so the same
// (sigma, A, B) may appear with several conditioning sets.
inline std::vector<NestedWitness> find_nested_constraints(const MDag& g) {
    if (!g.context().empty())
        throw DomainError("find_nested_constraints expects no context vertices");
    SepGraph orig = SepGraph::from(g);
    int n = g.size();
    std::vector<std::pair<int, int>> inseparable;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
            bool separable = false;
            for_each_subset(g.all() - VSet::single(a) - VSet::single(b), [&](VSet c) {
                if (!separable && !orig.connected(VSet::single(a), VSet::single(b), c))
                    separable = true;
            });
            if (!separable) inseparable.emplace_back(a, b);
        }

    std::vector<NestedWitness> all;
    for (const auto& [sigma, fixed] : reachable_graphs(g)) {
        if (sigma.empty()) continue;
        VSet sig;
        for (int v : sigma) sig.add(v);
        SepGraph fg = SepGraph::from(fixed);
        for (auto [a, b] : inseparable) {
            if (sig.contains(a) || sig.contains(b)) continue;
            for_each_subset(g.all() - VSet::single(a) - VSet::single(b), [&](VSet c) {
                if (fg.connected(VSet::single(a), VSet::single(b), c)) return;
                all.push_back({sigma, VSet::single(a), VSet::single(b), c});
            });
        }
    }
    auto key = [](const NestedWitness& w) {
        return std::tuple(w.sigma.size(), w.sigma, w.a.bits(), w.b.bits(), w.c.bits());
    };
    std::sort(all.begin(), all.end(),
              [&](const NestedWitness& x, const NestedWitness& y) { return key(x) < key(y); });
    return all;
}

// --- independence models -------------------------------------------------

struct CIStatement {
    VSet a, b, c;
};

// Membership-testable conditional independence model over vertices 0..n-1.
class IndependenceModel {
public:
    virtual ~IndependenceModel() = default;
    virtual int size() const = 0;
    virtual bool independent(VSet a, VSet b, VSet c) const = 0;
};

// The m-separations of a graph, queried on demand.
class GraphCIModel : public IndependenceModel {
public:
    explicit GraphCIModel(const MDag& g) : n_(g.size()), sep_(SepGraph::from(g)) {}
    int size() const override { return n_; }
    bool independent(VSet a, VSet b, VSet c) const override {
        return !sep_.connected(a, b, c);
    }
private:
    int n_;
    SepGraph sep_;
};

// An explicit statement list; membership is up to symmetry of A and B.
class ListCIModel : public IndependenceModel {
public:
    ListCIModel(int n, std::vector<CIStatement> statements)
        : n_(n), statements_(std::move(statements)) {}
    int size() const override { return n_; }
    bool independent(VSet a, VSet b, VSet c) const override {
        for (const auto& s : statements_)
            if (s.c == c && ((s.a == a && s.b == b) || (s.a == b && s.b == a)))
                return true;
        return false;
    }
private:
    int n_;
    std::vector<CIStatement> statements_;
};

// Witness that no DAG faithfully represents the model: v is independent of s,
// yet s renders a and b dependent across a separation that held without it.
struct NoDagPattern {
    int v = -1;
    int s = -1;
    int a = -1;
    int b = -1;
    VSet d;
};

// True when some DAG over the model's vertices induces exactly the model's
// independences.  A faithful DAG must have the model's inseparable pairs as
// its skeleton, so only orientations of that skeleton are enumerated.
inline bool faithful_dag_exists(const IndependenceModel& model) {
    int n = model.size();
    VSet everyone = VSet::first_n(n);
    std::vector<std::pair<int, int>> skeleton;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            bool separable = false;
            for_each_subset(everyone - VSet::single(i) - VSet::single(j), [&](VSet c) {
                if (!separable && model.independent(VSet::single(i), VSet::single(j), c))
                    separable = true;
            });
            if (!separable) skeleton.emplace_back(i, j);
        }
    if (skeleton.size() > 24)
        throw DomainError("faithful-DAG search is capped at 24 skeleton edges");
    std::vector<std::string> names;
    for (int i = 0; i < n; ++i) names.push_back("v" + std::to_string(i));
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << skeleton.size()); ++mask) {
        MDag dag(names);
        for (std::size_t k = 0; k < skeleton.size(); ++k) {
            auto [x, y] = skeleton[k];
            if (mask & (std::uint64_t{1} << k))
                dag.add_edge(x, y);
            else
                dag.add_edge(y, x);
        }
        if (!dag.is_acyclic()) continue;
        SepGraph s = SepGraph::from(dag);
        bool match = true;
        for (int i = 0; i < n && match; ++i)
            for (int j = i + 1; j < n && match; ++j)
                for_each_subset(everyone - VSet::single(i) - VSet::single(j), [&](VSet c) {
                    if (!match) return;
                    bool dag_sep = !s.connected(VSet::single(i), VSet::single(j), c);
                    if (dag_sep != model.independent(VSet::single(i), VSet::single(j), c))
                        match = false;
                });
        if (match) return true;
    }
    return false;
}

// Searches for the pattern  v ⫫ s,  a ⫫ b | D,  a ⫫̸ b | D ∪ {s}  with
// v ∈ {a,b} ∪ D and D inclusion-minimal among sets admitting the pattern for
// the pair.  The pattern alone does not certify anything: a fifth vertex
// mediating between v and s can realize it inside a faithful DAG model.  A
// hit is therefore confirmed by the exhaustive faithful-DAG search before it
// is returned, and the search result alone decides the null case.
inline std::optional<NoDagPattern> detect_nondag_pattern(const IndependenceModel& model) {
    if (faithful_dag_exists(model)) return std::nullopt;
    int n = model.size();
    VSet everyone = VSet::first_n(n);
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
            VSet rest = everyone - VSet::single(a) - VSet::single(b);
            std::vector<VSet> subsets;
            for_each_subset(rest, [&](VSet d) { subsets.push_back(d); });
            std::sort(subsets.begin(), subsets.end(), [](VSet x, VSet y) {
                return std::pair(x.count(), x.bits()) < std::pair(y.count(), y.bits());
            });
            for (VSet d : subsets) {
                if (!model.independent(VSet::single(a), VSet::single(b), d)) continue;
                for (int s : rest - d) {
                    if (model.independent(VSet::single(a), VSet::single(b),
                                          d | VSet::single(s)))
                        continue;
                    for (int v : VSet::single(a) | VSet::single(b) | d)
                        if (model.independent(VSet::single(v), VSet::single(s), VSet()))
                            return NoDagPattern{v, s, a, b, d};
                }
            }
        }
    }
    return std::nullopt;
}

}  // namespace mdagkit
