#ifndef JSJFORGE_CLASSIFY_HPP
#define JSJFORGE_CLASSIFY_HPP

#include <map>
#include <optional>

#include "jsjforge/moves.hpp"

namespace jsjforge {
namespace classify {

struct Budget {
    size_t max_nodes = 10000;
    Int max_label = 1000000;
    size_t max_divisors = 64;
    Budget scaled(int factor) const {
        Budget b = *this;
        b.max_nodes *= factor;
        b.max_label *= factor;
        return b;
    }
};

using NodeId = int;
using TrackId = int;  // edge or vertex id in the root graph

struct Arc {
    NodeId from = -1, to = -1;
    moves::MoveRecord rec;
    // identity transport across the arc for surviving edges/vertices,
    // composed with the canonical isomorphism into the target node
    std::map<EdgeId, EdgeId> edge_map;
    std::map<VertexId, VertexId> vertex_map;
};

struct AtlasNode {
    Graph g;
    CanonKey key;
    int depth = 0;
    // where the root graph's orbits live in this node (-1: lost)
    std::map<TrackId, EdgeId> edge_tracking;
    std::map<TrackId, VertexId> vertex_tracking;
    std::vector<int> arcs_out;  // indices into Atlas::arcs
};

// Explored ball of the reduced deformation space, deduplicated by canonical
// key, with the root graph's edge and vertex orbits tracked through moves.
struct Atlas {
    std::vector<AtlasNode> nodes;
    std::vector<Arc> arcs;
    std::map<std::string, NodeId> index;
    bool closed = false;      // frontier exhausted and nothing truncated
    bool truncated = false;   // a budget cap suppressed successors
    bool tracking_conflict = false;
    size_t explored = 0;
    const AtlasNode& root() const { return nodes.at(0); }
};

Atlas explore(const Graph& g, const Budget& budget);
std::string atlas_dot(const Atlas& atlas);
std::string atlas_trace(const Atlas& atlas);

enum class Verdict { Proven, Refuted, Unknown };

struct Witness {
    std::vector<std::string> trace;  // replayable move lines from the root
    std::string note;                // what the terminal configuration shows
};

struct TriState {
    Verdict verdict = Verdict::Unknown;
    Witness witness;           // Proven
    std::string evidence;      // Refuted: "closed-atlas" or a local obstruction
    size_t budget_used = 0;    // explored node count
    bool proven() const { return verdict == Verdict::Proven; }
    bool refuted() const { return verdict == Verdict::Refuted; }
    bool definite() const { return verdict != Verdict::Unknown; }
};

enum class GlobalProp { Slippery, TwoSlippery, Psa, Vanishing };

// Deformation-space-quantified edge properties over an explored atlas; the
// sequences implicitly preserve the tracked orbit (arcs losing it are dead
// ends for the search).
TriState global_property(const Atlas& atlas, EdgeId e, GlobalProp prop);
TriState global_property(const Graph& g, EdgeId e, GlobalProp prop, const Budget& budget);

// p.s.a. in either orientation
TriState psad(const Atlas& atlas, EdgeId e);

struct DeadEndResult {
    TriState status;
    // per node of the atlas: a qualifying wall (ends at the tracked vertex)
    std::map<NodeId, OrientedEdge> walls;
};
DeadEndResult dead_end(const Atlas& atlas, VertexId v);
DeadEndResult dead_end(const Graph& g, VertexId v, const Budget& budget);

// Spec-checked blow-up: requires dead_end(v) Proven unless forced.
Graph checked_blow_up(const Graph& g, VertexId v, const Budget& budget, bool force,
                      moves::MoveRecord* rec = nullptr);

// Replay a witness trace from the root graph; returns the final graph.
Graph replay(const Graph& root, const Witness& w);

}  // namespace classify
}  // namespace jsjforge

#endif
