#pragma once

#include <algorithm>
#include <cctype>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "mdagkit/errors.hpp"
#include "mdagkit/vertex_set.hpp"

namespace mdagkit {

// Per-vertex reachability relations.  All sets are reflexive where the
// definition demands it: v is in an(v), de(v) and dis(v) but never in pa(v)
// or sib(v).
struct VertexRelations {
    VSet pa, an, de, sib, dis;
};

// A directed acyclic graph over named vertices plus a simplicial complex of
// bidirected faces, stored by its facets (maximal faces).  A facet stands for
// one latent common cause whose children are the facet members.  Vertices in
// `context` have been fixed: they keep their outgoing edges but may not have
// incoming edges or facet membership.
//
// Vertex names are opaque strings, stored sorted; all indices below refer to
// positions in that sorted order, so identical graphs compare equal
// member-wise.  Values are immutable once built (the mutators exist for
// construction only) and all algorithms on them are pure.
class MDag {
public:
    MDag() = default;

    explicit MDag(std::vector<std::string> vertices) {
        std::sort(vertices.begin(), vertices.end());
        for (std::size_t i = 1; i < vertices.size(); ++i)
            if (vertices[i] == vertices[i - 1])
                throw DomainError("duplicate vertex '" + vertices[i] + "'");
        if (vertices.size() > 64)
            throw DomainError("vertex count exceeds the 64-vertex cap");
        names_ = std::move(vertices);
        parents_.assign(names_.size(), VSet());
    }

    int size() const { return static_cast<int>(names_.size()); }
    const std::vector<std::string>& vertex_names() const { return names_; }
    const std::string& name(int v) const { return names_[v]; }

    bool has_vertex(const std::string& n) const {
        return std::binary_search(names_.begin(), names_.end(), n);
    }

    int index_of(const std::string& n) const {
        auto it = std::lower_bound(names_.begin(), names_.end(), n);
        if (it == names_.end() || *it != n)
            throw DomainError("unknown vertex '" + n + "'");
        return static_cast<int>(it - names_.begin());
    }

    VSet all() const { return VSet::first_n(size()); }
    VSet context() const { return context_; }
    VSet random_vertices() const { return all() - context_; }

    // --- construction -----------------------------------------------------

    void add_edge(int from, int to) { parents_[to].add(from); }
    void add_edge(const std::string& from, const std::string& to) {
        add_edge(index_of(from), index_of(to));
    }

    void add_facet(VSet f) { facets_.push_back(f); }
    void add_facet(std::initializer_list<const char*> members) {
        VSet f;
        for (const char* m : members) f.add(index_of(m));
        facets_.push_back(f);
    }

    void mark_context(int v) { context_.add(v); }
    void mark_context(const std::string& n) { context_.add(index_of(n)); }

    // Drops facets that shrank below two members and facets contained in
    // another facet.  Fixing and projection re-establish facet maximality
    // through this.
    void normalize_facets() {
        std::vector<VSet> keep;
        for (VSet f : facets_) {
            if (f.count() < 2) continue;
            bool dominated = false;
            for (VSet g : facets_)
                if (g != f && f.subset_of(g)) { dominated = true; break; }
            if (!dominated &&
                std::find(keep.begin(), keep.end(), f) == keep.end())
                keep.push_back(f);
        }
        std::sort(keep.begin(), keep.end(),
                  [](VSet a, VSet b) { return a.bits() < b.bits(); });
        facets_ = std::move(keep);
    }

    // --- structure --------------------------------------------------------

    VSet parents(int v) const { return parents_[v]; }

    VSet children(int v) const {
        VSet c;
        for (int w = 0; w < size(); ++w)
            if (parents_[w].contains(v)) c.add(w);
        return c;
    }

    bool has_edge(int from, int to) const { return parents_[to].contains(from); }

    const std::vector<VSet>& facets() const { return facets_; }

    // Pairwise facet co-membership.
    VSet siblings(int v) const {
        VSet s;
        for (VSet f : facets_)
            if (f.contains(v)) s |= f;
        s.remove(v);
        return s;
    }

    VSet ancestors(int v) const { return close(VSet::single(v), /*up=*/true); }
    VSet descendants(int v) const { return close(VSet::single(v), /*up=*/false); }
    VSet ancestors_of(VSet s) const { return close(s, /*up=*/true); }
    VSet descendants_of(VSet s) const { return close(s, /*up=*/false); }

    // District: transitive closure of facet co-membership, including v.
    VSet district(int v) const {
        VSet d = VSet::single(v);
        bool grew = true;
        while (grew) {
            grew = false;
            for (VSet f : facets_)
                if (f.intersects(d) && !f.subset_of(d)) { d |= f; grew = true; }
        }
        return d;
    }

    VertexRelations relations(int v) const {
        require_vertex(v);
        VertexRelations r;
        r.pa = parents_[v];
        r.an = ancestors(v);
        r.de = descendants(v);
        r.sib = siblings(v);
        r.dis = district(v);
        return r;
    }
    VertexRelations relations(const std::string& n) const { return relations(index_of(n)); }

    // Kahn elimination with lexicographic (= index-order) tie-break.
    std::vector<int> topological_order() const {
        std::vector<int> order;
        VSet done;
        for (int step = 0; step < size(); ++step) {
            int pick = -1;
            for (int v = 0; v < size(); ++v)
                if (!done.contains(v) && (parents_[v] - done).empty()) { pick = v; break; }
            if (pick < 0) throw DomainError("cycle detected in directed part");
            order.push_back(pick);
            done.add(pick);
        }
        return order;
    }

    bool is_acyclic() const {
        VSet done;
        for (int step = 0; step < size(); ++step) {
            bool advanced = false;
            for (int v = 0; v < size(); ++v)
                if (!done.contains(v) && (parents_[v] - done).empty()) {
                    done.add(v);
                    advanced = true;
                }
            if (!advanced) break;
        }
        return done == all();
    }

    // Reports every violated invariant; an empty list means the graph is
    // valid.
    std::vector<std::string> validate() const {
        std::vector<std::string> bad;
        for (int v = 0; v < size(); ++v)
            if (parents_[v].contains(v))
                bad.push_back("self-loop at '" + names_[v] + "'");
        if (!is_acyclic()) bad.push_back("directed part is cyclic");
        for (VSet f : facets_) {
            if (!f.subset_of(all()))
                bad.push_back("facet references an out-of-range vertex");
            if (f.count() < 2)
                bad.push_back("facet " + set_to_string(f & all()) + " has fewer than two members");
        }
        for (std::size_t i = 0; i < facets_.size(); ++i)
            for (std::size_t j = 0; j < facets_.size(); ++j)
                if (i != j && facets_[i].subset_of(facets_[j]))
                    bad.push_back("facet " + set_to_string(facets_[i]) +
                                  " is not maximal (contained in " +
                                  set_to_string(facets_[j]) + ")");
        for (int v : context_) {
            if (!parents_[v].empty())
                bad.push_back("context vertex '" + names_[v] + "' has incoming edges");
            for (VSet f : facets_)
                if (f.contains(v))
                    bad.push_back("context vertex '" + names_[v] + "' belongs to a facet");
        }
        return bad;
    }

    // Keeps the vertices in S with the directed edges internal to S; the new
    // facets are the maximal elements of {F ∩ S : |F ∩ S| >= 2}.
    MDag induced_subgraph(VSet s) const {
        if (!s.subset_of(all())) throw DomainError("unknown vertex in subgraph selection");
        std::vector<std::string> kept;
        for (int v : s) kept.push_back(names_[v]);
        MDag out(kept);
        for (int v : s)
            for (int p : parents_[v] & s)
                out.add_edge(out.index_of(names_[p]), out.index_of(names_[v]));
        for (VSet f : facets_) {
            VSet g = f & s;
            if (g.count() < 2) continue;
            VSet h;
            for (int v : g) h.add(out.index_of(names_[v]));
            out.add_facet(h);
        }
        for (int v : context_ & s) out.mark_context(out.index_of(names_[v]));
        out.normalize_facets();
        return out;
    }

    // Removes the vertices of D together with every incident edge (the graph
    // surgery behind e-separation).
    MDag delete_vertices(VSet d) const { return induced_subgraph(all() - d); }

    VSet set_of(const std::vector<std::string>& ns) const {
        VSet s;
        for (const auto& n : ns) s.add(index_of(n));
        return s;
    }

    std::vector<std::string> names_of(VSet s) const {
        std::vector<std::string> out;
        for (int v : s) out.push_back(names_[v]);
        return out;
    }

    std::string set_to_string(VSet s) const {
        std::string out = "{";
        bool first = true;
        for (int v : s) {
            if (!first) out += ",";
            out += names_[v];
            first = false;
        }
        return out + "}";
    }

    bool operator==(const MDag& o) const {
        return names_ == o.names_ && parents_ == o.parents_ &&
               sorted_facets() == o.sorted_facets() && context_ == o.context_;
    }

    // --- file format --------------------------------------------------------
    //
    //   vertices v1 v2 ...     exactly once, first non-comment line
    //   edge a b               directed edge a -> b
    //   face v1 v2 ...         bidirected facet, two or more members
    //   context v1 ...         fixed vertices
    //
    // '#' starts a comment; blank lines are ignored.  Serialization emits the
    // lines in the order above with all members lexicographically sorted, so
    // parse(serialize(g)) == g.

    std::string serialize() const {
        std::ostringstream out;
        out << "vertices";
        for (const auto& n : names_) out << ' ' << n;
        out << '\n';
        std::vector<std::pair<std::string, std::string>> edges;
        for (int v = 0; v < size(); ++v)
            for (int p : parents_[v]) edges.emplace_back(names_[p], names_[v]);
        std::sort(edges.begin(), edges.end());
        for (const auto& [a, b] : edges) out << "edge " << a << ' ' << b << '\n';
        std::vector<std::vector<std::string>> faces;
        for (VSet f : facets_) faces.push_back(names_of(f));
        std::sort(faces.begin(), faces.end());
        for (const auto& f : faces) {
            out << "face";
            for (const auto& n : f) out << ' ' << n;
            out << '\n';
        }
        if (!context_.empty()) {
            out << "context";
            for (int v : context_) out << ' ' << names_[v];
            out << '\n';
        }
        return out.str();
    }

    static MDag parse(std::string_view text) {
        struct Token { std::string word; int col; };
        MDag g;
        bool have_vertices = false;
        int lineno = 0;
        std::size_t pos = 0;
        std::vector<std::pair<int, std::pair<std::string, std::string>>> edges;
        std::vector<std::pair<int, std::vector<std::string>>> faces;
        std::vector<std::pair<int, std::string>> context;
        while (pos <= text.size()) {
            std::size_t eol = text.find('\n', pos);
            if (eol == std::string_view::npos) eol = text.size();
            std::string_view line = text.substr(pos, eol - pos);
            ++lineno;
            pos = eol + 1;

            std::vector<Token> toks;
            for (std::size_t i = 0; i < line.size();) {
                if (std::isspace(static_cast<unsigned char>(line[i]))) { ++i; continue; }
                if (line[i] == '#') break;
                std::size_t j = i;
                while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j])) &&
                       line[j] != '#')
                    ++j;
                toks.push_back({std::string(line.substr(i, j - i)), static_cast<int>(i) + 1});
                i = j;
            }
            if (toks.empty()) {
                if (eol == text.size()) break;
                continue;
            }

            const std::string& kw = toks[0].word;
            if (kw == "vertices") {
                if (have_vertices)
                    throw ParseError(lineno, toks[0].col, "duplicate 'vertices' line");
                std::vector<std::string> vs;
                for (std::size_t i = 1; i < toks.size(); ++i) vs.push_back(toks[i].word);
                if (vs.empty())
                    throw ParseError(lineno, toks[0].col, "'vertices' line declares no vertex");
                std::sort(vs.begin(), vs.end());
                for (std::size_t i = 1; i < vs.size(); ++i)
                    if (vs[i] == vs[i - 1])
                        throw ParseError(lineno, toks[0].col,
                                         "duplicate vertex '" + vs[i] + "'");
                g = MDag(vs);
                have_vertices = true;
            } else if (kw == "edge" || kw == "face" || kw == "context") {
                if (!have_vertices)
                    throw ParseError(lineno, toks[0].col,
                                     "'vertices' must be the first declaration");
                auto vertex_at = [&](std::size_t i) {
                    if (!g.has_vertex(toks[i].word))
                        throw ParseError(lineno, toks[i].col,
                                         "undeclared vertex '" + toks[i].word + "'");
                    return toks[i].word;
                };
                if (kw == "edge") {
                    if (toks.size() != 3)
                        throw ParseError(lineno, toks[0].col, "'edge' takes exactly two vertices");
                    edges.push_back({lineno, {vertex_at(1), vertex_at(2)}});
                    if (toks[1].word == toks[2].word)
                        throw ParseError(lineno, toks[1].col,
                                         "self-loop at '" + toks[1].word + "'");
                } else if (kw == "face") {
                    if (toks.size() < 3)
                        throw ParseError(lineno, toks[0].col, "'face' needs at least two vertices");
                    std::vector<std::string> f;
                    for (std::size_t i = 1; i < toks.size(); ++i) f.push_back(vertex_at(i));
                    faces.push_back({lineno, f});
                } else {
                    for (std::size_t i = 1; i < toks.size(); ++i)
                        context.push_back({lineno, vertex_at(i)});
                }
            } else {
                throw ParseError(lineno, toks[0].col, "unknown directive '" + kw + "'");
            }
            if (eol == text.size()) break;
        }
        if (!have_vertices) throw ParseError(lineno == 0 ? 1 : lineno, 1, "missing 'vertices' line");
        for (const auto& [ln, e] : edges) g.add_edge(e.first, e.second);
        for (const auto& [ln, f] : faces) {
            VSet m;
            for (const auto& n : f) m.add(g.index_of(n));
            if (m.count() < 2)
                throw ParseError(ln, 1, "'face' members are not distinct");
            g.add_facet(m);
        }
        for (const auto& [ln, n] : context) g.mark_context(n);
        auto bad = g.validate();
        if (!bad.empty()) {
            std::string msg = "invalid graph:";
            for (const auto& b : bad) msg += " " + b + ";";
            throw ParseError(lineno, 1, msg);
        }
        return g;
    }

private:
    VSet close(VSet seed, bool up) const {
        VSet r = seed;
        bool grew = true;
        while (grew) {
            grew = false;
            for (int v = 0; v < size(); ++v) {
                if (r.contains(v)) continue;
                VSet link = up ? children(v) : parents_[v];
                if (link.intersects(r)) { r.add(v); grew = true; }
            }
        }
        return r;
    }

    void require_vertex(int v) const {
        if (v < 0 || v >= size()) throw DomainError("vertex index out of range");
    }

    std::vector<VSet> sorted_facets() const {
        std::vector<VSet> f = facets_;
        std::sort(f.begin(), f.end(), [](VSet a, VSet b) { return a.bits() < b.bits(); });
        return f;
    }

    std::vector<std::string> names_;
    std::vector<VSet> parents_;
    std::vector<VSet> facets_;
    VSet context_;
};

}  // namespace mdagkit
