#ifndef JSJFORGE_GOG_HPP
#define JSJFORGE_GOG_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "jsjforge/lattice.hpp"

namespace jsjforge {

using VertexId = int;
using EdgeId = int;

// An oriented edge: rev=false travels origin -> terminus. The edge end
// sitting at the initial vertex of an orientation doubles as "the end of the
// edge at that vertex", so ends and oriented edges share one type.
struct OrientedEdge {
    EdgeId edge = -1;
    bool rev = false;
    OrientedEdge() = default;
    OrientedEdge(EdgeId e, bool r) : edge(e), rev(r) {}
    OrientedEdge reverse() const { return {edge, !rev}; }
    bool operator==(const OrientedEdge& o) const { return edge == o.edge && rev == o.rev; }
    bool operator!=(const OrientedEdge& o) const { return !(*this == o); }
    bool operator<(const OrientedEdge& o) const {
        return edge != o.edge ? edge < o.edge : rev < o.rev;
    }
};

struct VertexData {
    int rank = 1;
    std::string name;
    bool composite = false;  // collapse of reduced edges; no further moves
};

struct EdgeData {
    VertexId origin = -1, terminus = -1;
    int edge_rank = 1;
    IntMat inj_origin;    // rank(origin) x edge_rank, full column rank
    IntMat inj_terminus;  // rank(terminus) x edge_rank
    std::string name;
};

class Graph {
public:
    VertexId add_vertex(int rank, const std::string& name = "");
    // Normalizes the pair (inj_origin, inj_terminus) by a common right
    // unimodular factor (rank 1: sign flip making the origin label positive).
    EdgeId add_edge(VertexId u, VertexId w, const IntMat& inj_u, const IntMat& inj_w,
                    const std::string& name = "");
    EdgeId add_edge_rank1(VertexId u, VertexId w, long m, long n, const std::string& name = "");
    void remove_edge(EdgeId e);
    void remove_vertex(VertexId v);  // must be isolated

    bool has_vertex(VertexId v) const { return vertices_.count(v) > 0; }
    bool has_edge(EdgeId e) const { return edges_.count(e) > 0; }
    const VertexData& vertex(VertexId v) const;
    VertexData& vertex_mut(VertexId v);
    const EdgeData& edge(EdgeId e) const;
    EdgeData& edge_mut(EdgeId e);
    const std::map<VertexId, VertexData>& vertices() const { return vertices_; }
    const std::map<EdgeId, EdgeData>& edges() const { return edges_; }

    bool is_loop(EdgeId e) const;
    VertexId initial(OrientedEdge d) const;
    VertexId terminal(OrientedEdge d) const;
    const IntMat& inj_initial(OrientedEdge d) const;
    const IntMat& inj_terminal(OrientedEdge d) const;
    void set_inj_initial(OrientedEdge d, const IntMat& m);
    // Image of the edge group at the initial vertex of d.
    Lattice image_initial(OrientedEdge d) const;
    Lattice image_terminal(OrientedEdge d) const;
    // Rank-1 label at the initial end of d.
    Int label_initial(OrientedEdge d) const;

    // All oriented edges with initial vertex v (a loop contributes both
    // orientations).
    std::vector<OrientedEdge> ends_at(VertexId v) const;

    bool is_connected() const;
    bool all_rank1() const;
    void validate() const;  // throws ValidationError

    VertexId fresh_vertex_id() const { return next_vertex_; }
    std::string fresh_edge_name(const std::string& stem) const;
    std::string fresh_vertex_name(const std::string& stem) const;

    std::optional<VertexId> vertex_by_name(const std::string& name) const;
    std::optional<EdgeId> edge_by_name(const std::string& name) const;

    // Re-apply the edge-group frame normalization after an in-place edit.
    void renormalize_edge(EdgeId e);
    // Largest |entry| over all injections (label growth guard).
    Int max_abs_entry() const;

private:
    std::map<VertexId, VertexData> vertices_;
    std::map<EdgeId, EdgeData> edges_;
    VertexId next_vertex_ = 0;
    EdgeId next_edge_ = 0;
};

// Grammar (line oriented, '#' comments):
//   vertex <name> <rank>
//   edge <name> <u> <w> [m:n]
//   edge <name> <u> <w> matrix <R> <C> <ints...> matrix <R> <C> <ints...>
//   loop <name> <v> [m:n]
Graph parse_graph(const std::string& text);
std::string serialize_graph(const Graph& g);
std::string to_dot(const Graph& g);

struct CycleInvariants {
    int betti = 0;
    bool has_modulus = false;            // rank-1 graphs only
    std::vector<Rat> modulus_generators;  // one per fundamental cycle, > 0
    RationalSubgroup modulus_subgroup;    // canonical form of <generators>
};
CycleInvariants cycle_invariants(const Graph& g);
bool same_invariants(const CycleInvariants& a, const CycleInvariants& b);

// Canonical key: equal keys iff labelled graphs are isomorphic (vertex
// renaming, orientation flips, edge-group frame change, simultaneous
// unimodular re-coordinatization of a vertex group). Exact at rank 1; at
// higher rank the frame search is bounded and `exact` reports whether the
// frame was pinned.
struct CanonKey {
    std::string bytes;
    bool exact = true;
    // canonical position of each vertex / edge, for transporting edge
    // identities across isomorphic graphs
    std::map<VertexId, int> vertex_pos;
    std::map<EdgeId, int> edge_pos;
};
CanonKey canonical_key(const Graph& g);

// The isomorphism g -> h implied by equal canonical keys (edge id map).
std::map<EdgeId, EdgeId> transport_edges(const CanonKey& from, const CanonKey& to);
std::map<VertexId, VertexId> transport_vertices(const CanonKey& from, const CanonKey& to);

}  // namespace jsjforge

#endif
