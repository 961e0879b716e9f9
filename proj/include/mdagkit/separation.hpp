#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mdagkit/errors.hpp"
#include "mdagkit/mdag.hpp"
#include "mdagkit/mixed_graph.hpp"
#include "mdagkit/vertex_set.hpp"

namespace mdagkit {

// Compact adjacency view used by the m-separation reachability.  Only the
// pairwise sibling relation matters for separation: traversing any bidirected
// face presents an arrowhead at both endpoints, and any two co-facet vertices
// are directly linked, so a facet behaves exactly like a clique of bidirected
// edges here.
struct SepGraph {
    std::vector<VSet> parents;
    std::vector<VSet> children;
    std::vector<VSet> siblings;

    int size() const { return static_cast<int>(parents.size()); }

    static SepGraph from(const MDag& g) {
        SepGraph s;
        int n = g.size();
        s.parents.resize(n);
        s.children.resize(n);
        s.siblings.resize(n);
        for (int v = 0; v < n; ++v) {
            s.parents[v] = g.parents(v);
            s.siblings[v] = g.siblings(v);
        }
        for (int v = 0; v < n; ++v)
            for (int p : s.parents[v]) s.children[p].add(v);
        return s;
    }

    // Separation on ancestral graphs follows the same rules; circle marks
    // carry no separation semantics and are rejected.
    static SepGraph from(const MarkedMixedGraph& m) {
        if (m.has_circle_marks())
            throw DomainError("separation is undefined on graphs with circle marks");
        SepGraph s;
        int n = m.size();
        s.parents.resize(n);
        s.children.resize(n);
        s.siblings.resize(n);
        for (const auto& [e, marks] : m.edges()) {
            auto [x, y] = e;
            auto [at_x, at_y] = marks;
            if (at_x == Mark::Tail && at_y == Mark::Arrow) {
                s.children[x].add(y);
                s.parents[y].add(x);
            } else if (at_x == Mark::Arrow && at_y == Mark::Tail) {
                s.children[y].add(x);
                s.parents[x].add(y);
            } else if (at_x == Mark::Arrow && at_y == Mark::Arrow) {
                s.siblings[x].add(y);
                s.siblings[y].add(x);
            } else {
                throw DomainError("undirected (tail-tail) edges are not supported");
            }
        }
        return s;
    }

    VSet ancestors_of(VSet c) const {
        VSet r = c;
        while (true) {
            VSet grow;
            for (int v : r) grow |= parents[v];
            if ((grow - r).empty()) return r;
            r |= grow;
        }
    }

    // True when some path from A to B is open given C.  Walk-state search
    // over (vertex, arrival mark): HEAD means the last edge put an arrowhead
    // at the vertex.  An internal vertex passes as a collider when both marks
    // are arrowheads and it has a directed path (possibly empty) into C, and
    // as a non-collider when it is outside C.  Open walks and open paths
    // coincide, so the search decides path-level separation.
    bool connected(VSet a, VSet b, VSet c) const {
        VSet an_c = ancestors_of(c);
        VSet head, tail;  // reached states
        for (int v : a) {
            head |= children[v] | siblings[v];
            tail |= parents[v];
        }
        while (true) {
            if ((head | tail).intersects(b)) return true;
            VSet nhead, ntail;
            for (int v : head) {
                if (!c.contains(v)) nhead |= children[v];
                if (an_c.contains(v)) {
                    ntail |= parents[v];
                    nhead |= siblings[v];
                }
            }
            for (int v : tail) {
                if (!c.contains(v)) {
                    nhead |= children[v] | siblings[v];
                    ntail |= parents[v];
                }
            }
            nhead -= head;
            ntail -= tail;
            if (nhead.empty() && ntail.empty()) return false;
            head |= nhead;
            tail |= ntail;
        }
    }
};

namespace detail {
inline void check_sep_query(const MDag& g, VSet a, VSet b, VSet c, VSet d = VSet()) {
    VSet all = g.all();
    if (!a.subset_of(all) || !b.subset_of(all) || !c.subset_of(all) || !d.subset_of(all))
        throw DomainError("separation query references an unknown vertex");
    if (a.empty() || b.empty())
        throw DomainError("separation query needs nonempty A and B");
    if (a.intersects(b) || a.intersects(c) || b.intersects(c) ||
        d.intersects(a | b | c))
        throw DomainError("separation query sets must be pairwise disjoint");
}
}  // namespace detail

// m-separation of A and B given C: every path between them is blocked.
inline bool m_separated(const MDag& g, VSet a, VSet b, VSet c) {
    detail::check_sep_query(g, a, b, c);
    return !SepGraph::from(g).connected(a, b, c);
}

inline bool m_separated(const MDag& g, const std::vector<std::string>& a,
                        const std::vector<std::string>& b,
                        const std::vector<std::string>& c) {
    return m_separated(g, g.set_of(a), g.set_of(b), g.set_of(c));
}

inline bool m_separated(const MarkedMixedGraph& m, VSet a, VSet b, VSet c) {
    if (a.empty() || b.empty() || a.intersects(b) || a.intersects(c) || b.intersects(c))
        throw DomainError("separation query sets must be nonempty and pairwise disjoint");
    return !SepGraph::from(m).connected(a, b, c);
}

// e-separation: m-separation after deleting D and all incident edges.
inline bool e_separated(const MDag& g, VSet a, VSet b, VSet c, VSet d) {
    detail::check_sep_query(g, a, b, c, d);
    if (d.empty()) return !SepGraph::from(g).connected(a, b, c);
    MDag h = g.delete_vertices(d);
    auto relabel = [&](VSet s) {
        VSet out;
        for (int v : s) out.add(h.index_of(g.name(v)));
        return out;
    };
    return !SepGraph::from(h).connected(relabel(a), relabel(b), relabel(c));
}

inline bool e_separated(const MDag& g, const std::vector<std::string>& a,
                        const std::vector<std::string>& b,
                        const std::vector<std::string>& c,
                        const std::vector<std::string>& d) {
    return e_separated(g, g.set_of(a), g.set_of(b), g.set_of(c), g.set_of(d));
}

// Markov blanket by its walk definition: vertices w reachable from v by a
// walk whose first edge carries an arrowhead into v and whose internal
// vertices are all colliders.  Such walks are exactly w -> v, a bidirected
// walk, or a bidirected walk entered through one final backwards directed
// edge, so the search tracks district members reached so far and closes with
// their parents.
inline VSet markov_blanket(const MDag& g, int v) {
    if (v < 0 || v >= g.size()) throw DomainError("unknown vertex");
    if (g.context().contains(v))
        throw DomainError("markov_blanket of a context vertex is undefined");
    VSet bidir = VSet::single(v);
    bool grew = true;
    while (grew) {
        grew = false;
        for (int u : bidir) {
            VSet next = g.siblings(u) - bidir;
            if (!next.empty()) { bidir |= next; grew = true; }
        }
    }
    VSet mb = bidir;
    for (int u : bidir) mb |= g.parents(u);
    mb.remove(v);
    return mb;
}

// Markov blanket by the district formula (dis(v) \ {v}) ∪ pa(dis(v)).
inline VSet markov_blanket_formula(const MDag& g, int v) {
    if (v < 0 || v >= g.size()) throw DomainError("unknown vertex");
    if (g.context().contains(v))
        throw DomainError("markov_blanket of a context vertex is undefined");
    VSet dis = g.district(v);
    VSet mb = dis;
    for (int u : dis) mb |= g.parents(u);
    mb.remove(v);
    return mb;
}

// Fixability: no strict descendant of v lies in v's district.
inline bool is_fixable(const MDag& g, int v) {
    if (v < 0 || v >= g.size()) throw DomainError("unknown vertex");
    return (g.descendants(v) & g.district(v)) == VSet::single(v);
}

// The same test phrased as the walk definition: strict descendants reachable
// from v by walks over only bidirected edges.  Kept separate so the two
// routes can be compared.
inline bool is_fixable_walk(const MDag& g, int v) {
    if (v < 0 || v >= g.size()) throw DomainError("unknown vertex");
    VSet bidir = g.district(v);  // bidirected-walk closure of {v}
    return ((g.descendants(v) - VSet::single(v)) & bidir).empty();
}

// Partition of the random (non-context) vertices into districts.
inline std::vector<VSet> districts(const MDag& g) {
    std::vector<VSet> out;
    VSet seen;
    for (int v = 0; v < g.size(); ++v) {
        if (seen.contains(v) || g.context().contains(v)) continue;
        VSet d = g.district(v);
        seen |= d;
        out.push_back(d);
    }
    return out;
}

// One open path between A and B given C, if any; used for --witness output.
// Edges on the path are rendered "x -> y", "x <- y" or "x <-> y".
struct OpenPath {
    std::vector<int> vertices;
    std::vector<std::string> edges;  // one per step, rendered with names
};

namespace detail {

enum class Step { Forward, Backward, Bidirected };

inline bool open_path_dfs(const MDag& g, const SepGraph& s, VSet b, VSet c, VSet an_c,
                          std::vector<int>& verts, std::vector<Step>& steps) {
    int v = verts.back();
    if (verts.size() > 1 && b.contains(v)) return true;
    auto try_step = [&](int w, Step st) {
        for (int u : verts)
            if (u == w) return false;
        if (verts.size() > 1) {
            // openness of the internal vertex v
            Step in = steps.back();
            bool head_in = in == Step::Forward || in == Step::Bidirected;
            bool head_out = st == Step::Backward || st == Step::Bidirected;
            if (head_in && head_out) {
                if (!an_c.contains(v)) return false;  // blocked collider
            } else {
                if (c.contains(v)) return false;  // conditioned non-collider
            }
        }
        verts.push_back(w);
        steps.push_back(st);
        if (open_path_dfs(g, s, b, c, an_c, verts, steps)) return true;
        verts.pop_back();
        steps.pop_back();
        return false;
    };
    for (int w : s.children[v])
        if (try_step(w, Step::Forward)) return true;
    for (int w : s.parents[v])
        if (try_step(w, Step::Backward)) return true;
    for (int w : s.siblings[v])
        if (try_step(w, Step::Bidirected)) return true;
    return false;
}

}  // namespace detail

inline std::optional<OpenPath> find_open_path(const MDag& g, VSet a, VSet b, VSet c) {
    detail::check_sep_query(g, a, b, c);
    SepGraph s = SepGraph::from(g);
    VSet an_c = s.ancestors_of(c);
    for (int start : a) {
        std::vector<int> verts{start};
        std::vector<detail::Step> steps;
        if (detail::open_path_dfs(g, s, b, c, an_c, verts, steps)) {
            OpenPath p;
            p.vertices = verts;
            for (std::size_t i = 0; i < steps.size(); ++i) {
                const std::string& x = g.name(verts[i]);
                const std::string& y = g.name(verts[i + 1]);
                switch (steps[i]) {
                    case detail::Step::Forward: p.edges.push_back(x + " -> " + y); break;
                    case detail::Step::Backward: p.edges.push_back(x + " <- " + y); break;
                    case detail::Step::Bidirected: p.edges.push_back(x + " <-> " + y); break;
                }
            }
            return p;
        }
    }
    return std::nullopt;
}

}  // namespace mdagkit
