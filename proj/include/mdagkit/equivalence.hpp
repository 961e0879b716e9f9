#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mdagkit/errors.hpp"
#include "mdagkit/mdag.hpp"
#include "mdagkit/mixed_graph.hpp"
#include "mdagkit/projection.hpp"
#include "mdagkit/separation.hpp"
#include "mdagkit/vertex_set.hpp"

namespace mdagkit {

// Ancestral: acyclic directed part and no vertex is an ancestor of one of its
// siblings.  Only tail/arrowhead marks are meaningful here.
inline bool is_ancestral(const MarkedMixedGraph& m) {
    if (m.has_circle_marks())
        throw DomainError("is_ancestral expects a graph without circle marks");
    if (!m.directed_part_acyclic()) return false;
    for (int v = 0; v < m.size(); ++v) {
        VSet an_v = m.ancestors(v);
        for (int w : m.siblings(v))
            if (an_v.contains(w) && w != v) return false;
    }
    return true;
}

// Maximal: every non-adjacent pair admits some separating set.
inline bool is_maximal(const MarkedMixedGraph& m) {
    if (!is_ancestral(m)) throw DomainError("is_maximal expects an ancestral graph");
    SepGraph s = SepGraph::from(m);
    for (int i = 0; i < m.size(); ++i)
        for (int j = i + 1; j < m.size(); ++j) {
            if (m.adjacent(i, j)) continue;
            bool separable = false;
            for_each_subset(m.all() - VSet::single(i) - VSet::single(j), [&](VSet c) {
                if (!separable && !s.connected(VSet::single(i), VSet::single(j), c))
                    separable = true;
            });
            if (!separable) return false;
        }
    return true;
}

namespace detail {

// Per-pair bitset of separating subsets; the complete m-separation structure
// of a graph on up to 8 vertices fits one word per pair.
inline std::vector<std::uint64_t> separation_fingerprint(const SepGraph& s) {
    int n = s.size();
    if (n > 8) throw DomainError("separation fingerprints are capped at 8 vertices");
    std::vector<std::uint64_t> fp;
    fp.reserve(n * (n - 1) / 2);
    VSet everyone = VSet::first_n(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            VSet rest = everyone - VSet::single(i) - VSet::single(j);
            std::uint64_t word = 0;
            int bit = 0;
            for_each_subset(rest, [&](VSet c) {
                if (!s.connected(VSet::single(i), VSet::single(j), c))
                    word |= std::uint64_t{1} << bit;
                ++bit;
            });
            fp.push_back(word);
        }
    return fp;
}

// Early-exit comparison against a precomputed fingerprint.
inline bool fingerprint_matches(const SepGraph& s, const std::vector<std::uint64_t>& target) {
    int n = s.size();
    VSet everyone = VSet::first_n(n);
    std::size_t idx = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            VSet rest = everyone - VSet::single(i) - VSet::single(j);
            std::uint64_t word = 0;
            int bit = 0;
            for_each_subset(rest, [&](VSet c) {
                if (!s.connected(VSet::single(i), VSet::single(j), c))
                    word |= std::uint64_t{1} << bit;
                ++bit;
            });
            if (word != target[idx++]) return false;
        }
    return true;
}

}  // namespace detail

// Ordinary Markov equivalence, decided by comparing the full m-separation
// structure.  Separation of vertex sets decomposes into separation of the
// member pairs under the same conditioning set, so comparing all singleton
// pairs against all conditioning sets covers every disjoint triple.
inline bool markov_equivalent(const MarkedMixedGraph& m1, const MarkedMixedGraph& m2) {
    if (m1.vertex_names() != m2.vertex_names())
        throw DomainError("markov_equivalent expects identical vertex sets");
    if (!is_maximal(m1) || !is_maximal(m2))
        throw DomainError("markov_equivalent expects maximal ancestral graphs");
    return detail::separation_fingerprint(SepGraph::from(m1)) ==
           detail::separation_fingerprint(SepGraph::from(m2));
}

struct EquivalenceClass {
    std::vector<std::pair<int, int>> skeleton;
    std::vector<MarkedMixedGraph> members;
    MarkedMixedGraph pag;
};

// Enumerates the Markov equivalence class of a MAG by brute force: all 3^|E|
// orientations of its skeleton, filtered to ancestral graphs with the same
// separation structure.  (Equal separations over an equal skeleton imply
// maximality, since the input is maximal.)  The PAG keeps a mark where every
// member agrees and a circle elsewhere.
inline EquivalenceClass enumerate_class(const MarkedMixedGraph& m, int max_edges = 12) {
    if (!is_maximal(m)) throw DomainError("enumerate_class expects a maximal ancestral graph");
    std::vector<std::pair<int, int>> skel;
    for (const auto& [e, marks] : m.edges()) skel.push_back(e);
    if (static_cast<int>(skel.size()) > max_edges)
        throw DomainError("skeleton has " + std::to_string(skel.size()) +
                          " edges, above the cap of " + std::to_string(max_edges));

    auto target = detail::separation_fingerprint(SepGraph::from(m));

    EquivalenceClass cls;
    cls.skeleton = skel;
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < skel.size(); ++i) total *= 3;
    for (std::uint64_t code = 0; code < total; ++code) {
        MarkedMixedGraph cand(m.vertex_names());
        std::uint64_t rest = code;
        for (const auto& [x, y] : skel) {
            switch (rest % 3) {
                case 0: cand.add_directed(x, y); break;
                case 1: cand.add_directed(y, x); break;
                default: cand.add_bidirected(x, y); break;
            }
            rest /= 3;
        }
        if (!is_ancestral(cand)) continue;
        if (!detail::fingerprint_matches(SepGraph::from(cand), target)) continue;
        cls.members.push_back(std::move(cand));
    }

    cls.pag = MarkedMixedGraph(m.vertex_names());
    for (const auto& [x, y] : skel) {
        auto agree = [&](int at, int other) {
            Mark first = cls.members.front().mark_at(at, other);
            for (const auto& mem : cls.members)
                if (mem.mark_at(at, other) != first) return Mark::Circle;
            return first;
        };
        cls.pag.set_edge(x, y, agree(x, y), agree(y, x));
    }
    return cls;
}

// The PAG of an mDAG: invariant marks across the Markov equivalence class of
// its maximal ancestral projection.
inline MarkedMixedGraph build_pag(const MDag& g, int max_edges = 12) {
    return enumerate_class(mag_project(g), max_edges).pag;
}

inline std::vector<std::pair<int, int>> bidirected_edges(const MarkedMixedGraph& m) {
    std::vector<std::pair<int, int>> out;
    for (const auto& [e, marks] : m.edges())
        if (marks.first == Mark::Arrow && marks.second == Mark::Arrow)
            out.push_back(e);
    return out;
}

// If the conditional independence structure of g is that of a DAG (its PAG
// has no bidirected edge), returns one DAG from the equivalence class.
inline std::optional<MDag> ci_dag_representable(const MDag& g, int max_edges = 12) {
    EquivalenceClass cls = enumerate_class(mag_project(g), max_edges);
    if (!bidirected_edges(cls.pag).empty()) return std::nullopt;
    for (const auto& mem : cls.members) {
        if (!bidirected_edges(mem).empty()) continue;
        MDag dag(mem.vertex_names());
        for (const auto& [e, marks] : mem.edges()) {
            if (marks.first == Mark::Tail)
                dag.add_edge(e.first, e.second);
            else
                dag.add_edge(e.second, e.first);
        }
        return dag;
    }
    throw DomainError("bidirected-free PAG without a DAG member");  // unreachable
}

}  // namespace mdagkit
