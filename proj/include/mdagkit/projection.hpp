#pragma once

#include <string>
#include <utility>
#include <vector>

#include "mdagkit/errors.hpp"
#include "mdagkit/mdag.hpp"
#include "mdagkit/mixed_graph.hpp"
#include "mdagkit/separation.hpp"
#include "mdagkit/vertex_set.hpp"

namespace mdagkit {

// The canonical DAG of an mDAG: one fresh latent vertex per facet, with the
// facet members as its children.  latents maps each latent name to the facet
// it replaced, expressed in source-graph vertex names.
struct CanonicalDag {
    MDag graph;
    std::vector<std::pair<std::string, std::vector<std::string>>> latents;
    std::vector<std::string> observed;
};

inline CanonicalDag canonical_dag(const MDag& g) {
    // Latents are named h1, h2, ... following the lexicographic order of the
    // facets; the prefix grows if a name is already taken.
    std::vector<std::vector<std::string>> faces;
    for (VSet f : g.facets()) faces.push_back(g.names_of(f));
    std::sort(faces.begin(), faces.end());

    std::string prefix = "h";
    for (bool ok = false; !ok; prefix += "h") {
        ok = true;
        for (std::size_t i = 1; i <= faces.size(); ++i)
            if (g.has_vertex(prefix + std::to_string(i))) { ok = false; break; }
        if (ok) break;
    }

    CanonicalDag out;
    out.observed = g.vertex_names();
    std::vector<std::string> names = g.vertex_names();
    for (std::size_t i = 1; i <= faces.size(); ++i)
        names.push_back(prefix + std::to_string(i));
    out.graph = MDag(names);
    for (int v = 0; v < g.size(); ++v)
        for (int p : g.parents(v)) out.graph.add_edge(g.name(p), g.name(v));
    for (std::size_t i = 0; i < faces.size(); ++i) {
        std::string latent = prefix + std::to_string(i + 1);
        for (const std::string& child : faces[i]) out.graph.add_edge(latent, child);
        out.latents.emplace_back(latent, faces[i]);
    }
    for (int v : g.context()) out.graph.mark_context(g.name(v));
    return out;
}

// Latent projection onto the vertex set keep.  Directed edges arise from
// directed walks whose internal vertices were projected out; a set B becomes
// a face when a single source (a projected-out vertex or a face of g) reaches
// every member of B by directed paths internal to the projected-out set.  The
// output facets are the maximal such faces.
inline MDag latent_project(const MDag& g, VSet keep) {
    if (!keep.subset_of(g.all())) throw DomainError("unknown vertex in projection");
    if (!g.context().subset_of(keep))
        throw DomainError("cannot project out a context vertex");
    VSet latent = g.all() - keep;

    // Observed vertices reachable from seed by directed paths whose vertices
    // before the endpoint all lie in the latent set.
    auto observed_reach = [&](VSet seed) {
        VSet frontier = seed;
        VSet seen = seed;
        VSet hits;
        while (!frontier.empty()) {
            VSet next;
            for (int u : frontier) next |= g.children(u);
            next -= seen;
            seen |= next;
            hits |= next & keep;
            frontier = next & latent;
        }
        return hits;
    };

    MDag out(g.names_of(keep));
    for (int a : keep) {
        VSet direct = g.children(a) & keep;
        VSet via = observed_reach(g.children(a) & latent);
        for (int b : (direct | via))
            if (b != a) out.add_edge(out.index_of(g.name(a)), out.index_of(g.name(b)));
    }

    std::vector<VSet> candidate_faces;
    for (int l : latent)
        candidate_faces.push_back(observed_reach(VSet::single(l)) | (g.children(l) & keep));
    for (VSet f : g.facets())
        candidate_faces.push_back((f & keep) | observed_reach(f & latent));
    for (VSet f : candidate_faces) {
        if (f.count() < 2) continue;
        VSet relabeled;
        for (int v : f) relabeled.add(out.index_of(g.name(v)));
        out.add_facet(relabeled);
    }
    out.normalize_facets();
    for (int v : g.context()) out.mark_context(out.index_of(g.name(v)));
    return out;
}

inline MDag latent_project(const MDag& g, const std::vector<std::string>& keep) {
    return latent_project(g, g.set_of(keep));
}

// Maximal ancestral projection.  Two vertices are adjacent exactly when no
// candidate set separates them (decided by exhaustive subset enumeration);
// the edge is directed along an ancestral relation and bidirected otherwise.
inline MarkedMixedGraph mag_project(const MDag& g) {
    if (!g.context().empty())
        throw DomainError("mag_project expects a graph without context vertices");
    if (g.size() > 16)
        throw DomainError("mag_project is capped at 16 vertices (subset enumeration)");
    MarkedMixedGraph out(g.vertex_names());
    SepGraph s = SepGraph::from(g);
    for (int i = 0; i < g.size(); ++i) {
        VSet an_i = g.ancestors(i);
        for (int j = i + 1; j < g.size(); ++j) {
            VSet rest = g.all() - VSet::single(i) - VSet::single(j);
            bool separable = false;
            for_each_subset(rest, [&](VSet c) {
                if (!separable && !s.connected(VSet::single(i), VSet::single(j), c))
                    separable = true;
            });
            if (separable) continue;
            if (an_i.contains(j))
                out.add_directed(j, i);  // j is an ancestor of i
            else if (g.ancestors(j).contains(i))
                out.add_directed(i, j);
            else
                out.add_bidirected(i, j);
        }
    }
    return out;
}

}  // namespace mdagkit
