#pragma once

#include <algorithm>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "mdagkit/errors.hpp"
#include "mdagkit/vertex_set.hpp"

namespace mdagkit {

enum class Mark { Tail, Arrow, Circle };

inline const char* mark_name(Mark m) {
    switch (m) {
        case Mark::Tail: return "tail";
        case Mark::Arrow: return "arrow";
        case Mark::Circle: return "circle";
    }
    return "?";
}

// Simple mixed graph with an end mark at each side of every edge.  MAGs use
// only tails and arrowheads; PAGs add circles.  Undirected (tail-tail) edges
// do not occur here: selection bias is out of scope.
class MarkedMixedGraph {
public:
    MarkedMixedGraph() = default;

    explicit MarkedMixedGraph(std::vector<std::string> vertices) {
        std::sort(vertices.begin(), vertices.end());
        for (std::size_t i = 1; i < vertices.size(); ++i)
            if (vertices[i] == vertices[i - 1])
                throw DomainError("duplicate vertex '" + vertices[i] + "'");
        if (vertices.size() > 64) throw DomainError("vertex count exceeds the 64-vertex cap");
        names_ = std::move(vertices);
    }

    int size() const { return static_cast<int>(names_.size()); }
    const std::vector<std::string>& vertex_names() const { return names_; }
    const std::string& name(int v) const { return names_[v]; }
    VSet all() const { return VSet::first_n(size()); }

    int index_of(const std::string& n) const {
        auto it = std::lower_bound(names_.begin(), names_.end(), n);
        if (it == names_.end() || *it != n) throw DomainError("unknown vertex '" + n + "'");
        return static_cast<int>(it - names_.begin());
    }

    // Stores marks (at_lo, at_hi) for the unordered pair {lo, hi}.
    void set_edge(int x, int y, Mark at_x, Mark at_y) {
        if (x == y) throw DomainError("self-loop");
        if (x > y) { std::swap(x, y); std::swap(at_x, at_y); }
        edges_[{x, y}] = {at_x, at_y};
    }
    void add_directed(int from, int to) { set_edge(from, to, Mark::Tail, Mark::Arrow); }
    void add_bidirected(int x, int y) { set_edge(x, y, Mark::Arrow, Mark::Arrow); }
    void remove_edge(int x, int y) {
        if (x > y) std::swap(x, y);
        edges_.erase({x, y});
    }

    bool adjacent(int x, int y) const {
        if (x > y) std::swap(x, y);
        return edges_.count({x, y}) != 0;
    }

    // Mark at x on the edge {x, y}.
    Mark mark_at(int x, int y) const {
        bool swapped = x > y;
        if (swapped) std::swap(x, y);
        auto it = edges_.find({x, y});
        if (it == edges_.end()) throw DomainError("no edge between the given vertices");
        return swapped ? it->second.second : it->second.first;
    }

    const std::map<std::pair<int, int>, std::pair<Mark, Mark>>& edges() const { return edges_; }

    VSet adjacency(int v) const {
        VSet s;
        for (const auto& [e, m] : edges_) {
            if (e.first == v) s.add(e.second);
            if (e.second == v) s.add(e.first);
        }
        return s;
    }

    bool has_circle_marks() const {
        for (const auto& [e, m] : edges_)
            if (m.first == Mark::Circle || m.second == Mark::Circle) return true;
        return false;
    }

    bool is_directed_edge(int from, int to) const {
        return adjacent(from, to) && mark_at(from, to) == Mark::Tail &&
               mark_at(to, from) == Mark::Arrow;
    }
    bool is_bidirected_edge(int x, int y) const {
        return adjacent(x, y) && mark_at(x, y) == Mark::Arrow &&
               mark_at(y, x) == Mark::Arrow;
    }

    VSet parents(int v) const {
        VSet s;
        for (int w : adjacency(v))
            if (is_directed_edge(w, v)) s.add(w);
        return s;
    }
    VSet children(int v) const {
        VSet s;
        for (int w : adjacency(v))
            if (is_directed_edge(v, w)) s.add(w);
        return s;
    }
    VSet siblings(int v) const {
        VSet s;
        for (int w : adjacency(v))
            if (is_bidirected_edge(v, w)) s.add(w);
        return s;
    }

    VSet ancestors(int v) const {
        VSet r = VSet::single(v);
        bool grew = true;
        while (grew) {
            grew = false;
            for (int w = 0; w < size(); ++w)
                if (!r.contains(w) && children(w).intersects(r)) { r.add(w); grew = true; }
        }
        return r;
    }

    bool directed_part_acyclic() const {
        VSet done;
        for (int step = 0; step < size(); ++step) {
            bool advanced = false;
            for (int v = 0; v < size(); ++v)
                if (!done.contains(v) && (parents(v) - done).empty()) {
                    done.add(v);
                    advanced = true;
                }
            if (!advanced) break;
        }
        return done == all();
    }

    bool operator==(const MarkedMixedGraph& o) const {
        return names_ == o.names_ && edges_ == o.edges_;
    }

    // MAGs serialize with edge/biedge lines; anything carrying circles falls
    // back to explicit mark lines.
    std::string serialize() const {
        std::ostringstream out;
        out << "vertices";
        for (const auto& n : names_) out << ' ' << n;
        out << '\n';
        bool plain = !has_circle_marks();
        for (const auto& [e, m] : edges_) {
            const std::string& x = names_[e.first];
            const std::string& y = names_[e.second];
            if (plain && m.first == Mark::Tail && m.second == Mark::Arrow)
                out << "edge " << x << ' ' << y << '\n';
            else if (plain && m.first == Mark::Arrow && m.second == Mark::Tail)
                out << "edge " << y << ' ' << x << '\n';
            else if (plain && m.first == Mark::Arrow && m.second == Mark::Arrow)
                out << "biedge " << x << ' ' << y << '\n';
            else
                out << "mark " << x << ' ' << y << ' ' << mark_name(m.first) << ' '
                    << mark_name(m.second) << '\n';
        }
        return out.str();
    }

private:
    std::vector<std::string> names_;
    std::map<std::pair<int, int>, std::pair<Mark, Mark>> edges_;
};

}  // namespace mdagkit
