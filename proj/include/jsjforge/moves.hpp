#ifndef JSJFORGE_MOVES_HPP
#define JSJFORGE_MOVES_HPP

#include <set>

#include "jsjforge/gog.hpp"

namespace jsjforge {
namespace moves {

struct EdgeKind {
    bool reduced = false;
    bool ascending = false;
    bool strictly_ascending = false;
    bool toric = false;
    bool pre_ascending = false;
    bool pre_descending = false;
};

EdgeKind local_kind(const Graph& g, OrientedEdge e);
bool edge_reduced(const Graph& g, EdgeId e);
bool graph_reduced(const Graph& g);

struct MoveRecord {
    enum class Kind { Slide, Induction, AMove, AInverseMove, Collapse, Expansion, BlowUp };
    Kind kind = Kind::Slide;
    OrientedEdge f, e;       // Slide(f along e); AInverseMove(e, f)
    Lattice lattice;          // Induction A / Expansion H
    VertexId vertex = -1;     // Expansion / BlowUp
    std::vector<OrientedEdge> ends;  // Expansion set, BlowUp wall in ends[0]
    std::set<EdgeId> destroyed_edges;
    std::set<VertexId> destroyed_vertices;
    std::set<EdgeId> created_edges;
    std::set<VertexId> created_vertices;
    std::string line;  // replayable serialization, filled on apply
};

// Slide the terminal end of f along e (t(f) = o(e), im_t(f) <= im_o(e)).
Graph slide(const Graph& g, OrientedEdge f, OrientedEdge e, MoveRecord* rec = nullptr);

// Induction on a strictly ascending loop e with group A (omega-image <= A <=
// G_v); every other edge end at the loop vertex is composed with A's
// inclusion matrix.
Graph induct(const Graph& g, OrientedEdge e, const Lattice& a, MoveRecord* rec = nullptr,
             bool allow_trivial = false);

// A-move on a pre-ascending, non-ascending loop: the paper's composite
// (expansion of the loop vertex with the alpha-image, then the induction,
// which here degenerates to a slide of the new edge).
Graph a_move(const Graph& g, OrientedEdge e, MoveRecord* rec = nullptr);

// Inverse A-move: e strictly ascending loop at w, f a non-loop edge into w
// whose image at w has full rank, contains the loop's omega-image and the
// image of every other end at w. Destroys f and w.
Graph a_inverse_move(const Graph& g, OrientedEdge e, OrientedEdge f, MoveRecord* rec = nullptr);

// Collapse a non-loop edge. Non-reduced: the full-image side is absorbed.
// Reduced: the merged vertex is flagged composite (no further moves).
Graph collapse(const Graph& g, EdgeId e, MoveRecord* rec = nullptr);

// Expansion of v with group H and a set of edge ends at v (pairwise distinct
// edges). The new edge's initial vertex carries H; collapse inverts it.
Graph expand(const Graph& g, VertexId v, const Lattice& h, const std::vector<OrientedEdge>& f_set,
             MoveRecord* rec = nullptr);

// Expansion with the full vertex group and a single wall end. Dead-end
// validation lives in classify::dead_end; callers wanting the checked variant
// go through classify::checked_blow_up.
Graph blow_up(const Graph& g, VertexId v, OrientedEdge wall, MoveRecord* rec = nullptr);

// Collapse non-reduced non-loop orbits one by one in canonical order.
std::pair<Graph, std::vector<EdgeId>> reduce(const Graph& g);

struct MoveBudget {
    Int max_label = 1000000;
    size_t max_divisors = 64;
};

// Complete list of admissible Slide / Induction / AMove / AInverseMove records
// on a reduced graph. Each applied result is reduced. `truncated` reports
// that a budget cap suppressed candidates (the list may be incomplete).
std::vector<MoveRecord> admissible_moves(const Graph& g, const MoveBudget& budget,
                                         bool* truncated = nullptr);

Graph apply_move(const Graph& g, const MoveRecord& rec);
Graph apply_trace_line(const Graph& g, const std::string& line, MoveRecord* rec = nullptr);
Graph apply_trace(const Graph& g, const std::vector<std::string>& lines);

std::string oriented_name(const Graph& g, OrientedEdge d);

}  // namespace moves
}  // namespace jsjforge

#endif
