#ifndef JSJFORGE_BASS_SERRE_HPP
#define JSJFORGE_BASS_SERRE_HPP

#include <memory>
#include <string>
#include <vector>

#include "jsjforge/gog.hpp"

namespace jsjforge {
namespace bs {

// One step of a path in the Bass-Serre tree: multiply by a vertex-group
// element, then traverse an oriented edge. The fundamental group is taken
// with respect to a spanning tree; tree edges contribute trivial letters but
// still count as traversals.
struct Syllable {
    IntVec coset;    // element of the vertex group at the step's start
    OrientedEdge d;  // traversed edge
};

// A path word from `base` to `end`: c1 t1 c2 t2 ... ck tk * tail.
struct PathWord {
    VertexId base = -1;
    std::vector<Syllable> syls;
    IntVec tail;
    VertexId end = -1;
};

// A vertex of the Bass-Serre tree: the coset reached from the base lift by a
// reduced path with canonical coset entries and zero tail.
struct TreeVertex {
    VertexId qvertex = -1;
    std::vector<Syllable> path;
    std::string key;  // canonical bytes, equality of handles = equality of vertices
    bool operator==(const TreeVertex& o) const { return key == o.key; }
    bool operator<(const TreeVertex& o) const { return key < o.key; }
};

// Britton-style normal form engine for the fundamental group of a vGBS graph
// of groups. Words are written in the vertex generators (v.1, v.2, ...; a
// bare rank-1 vertex name is accepted) and the stable letters of non-tree
// edges (named by their edge). The stable letter t of an edge with origin
// injection A and terminus injection W satisfies t A(x) t^-1 = W(x).
class Engine {
public:
    explicit Engine(const Graph& g, VertexId base = -1);

    const Graph& graph() const { return g_; }
    VertexId base() const { return base_; }
    bool is_tree_edge(EdgeId e) const { return tree_.count(e) > 0; }

    PathWord parse_word(const std::string& text) const;
    std::string word_str(const PathWord& w) const;

    PathWord identity() const;
    PathWord normal_form(const PathWord& w) const;
    bool is_identity(const PathWord& w) const;
    bool equal(const PathWord& a, const PathWord& b) const;
    PathWord mul(const PathWord& a, const PathWord& b) const;
    PathWord inverse(const PathWord& a) const;
    PathWord conj(const PathWord& h, const PathWord& w) const;  // h^-1 w h
    PathWord power(const PathWord& w, long k) const;

    TreeVertex base_vertex() const;
    TreeVertex vertex_of_path(const PathWord& p) const;
    PathWord path_of_vertex(const TreeVertex& v) const;
    TreeVertex act(const PathWord& g, const TreeVertex& v) const;
    std::vector<TreeVertex> geodesic(const TreeVertex& a, const TreeVertex& b) const;
    long distance(const TreeVertex& a, const TreeVertex& b) const;

    struct Classified {
        bool elliptic = true;
        long length = 0;      // translation length when hyperbolic
        TreeVertex point;     // fixed vertex / point on the axis
        PathWord conj;        // path from base to the cyclic-reduction position
        PathWord core;        // cyclically reduced word at conj's endpoint
    };
    Classified classify(const PathWord& w) const;

    bool fixes(const PathWord& g, const TreeVertex& v) const;
    // v on the axis of a hyperbolic element (by d(v, g v) = l(g))
    bool on_axis(const PathWord& g, long length, const TreeVertex& v) const;
    // axis vertices from the classified point, `edges` steps forward
    std::vector<TreeVertex> axis_segment(const Classified& c, int edges) const;

    // Does some edge at vertex x lie in Fix(a) /\ Fix(b)? (a, b elliptic
    // fixing x; exact via the incident edge-image lattices.)
    bool joint_fixed_edge_at(const PathWord& a, const PathWord& b, const TreeVertex& x) const;

private:
    Graph g_;
    VertexId base_;
    std::set<EdgeId> tree_;
    std::map<VertexId, std::vector<OrientedEdge>> tree_parent_;  // path to base
    std::vector<OrientedEdge> tree_path(VertexId from, VertexId to) const;
    void push_syllable(PathWord& acc, const IntVec& c, OrientedEdge d) const;
    void push_vertex_elt(PathWord& acc, const IntVec& c) const;
    friend struct EngineTestPeek;
};

struct HullFragment {
    std::vector<TreeVertex> vertices;
    std::vector<std::pair<TreeVertex, TreeVertex>> edges;
    int radius = 0;
    bool saturated = false;
};

// Convex hull fragment of the characteristic spaces of S (union of fixed
// sets / axes plus pairwise bridges), materialized to `radius`.
HullFragment characteristic_hull(const Engine& eng, const std::vector<PathWord>& s, int radius);

}  // namespace bs
}  // namespace jsjforge

#endif
