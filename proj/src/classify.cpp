#include "jsjforge/classify.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <atomic>
#include <future>
#include <sstream>

namespace jsjforge {
namespace classify {

namespace {

int thread_cap() {
    if (const char* env = std::getenv("JSJ_FORGE_THREADS")) {
        int n = std::atoi(env);
        if (n >= 1) return n;
    }
    return 1;
}

}  // namespace

Atlas explore(const Graph& g, const Budget& budget) {
    if (!moves::graph_reduced(g)) throw Error(ErrorKind::NotReduced, "explore: graph not reduced");
    Atlas atlas;
    AtlasNode root;
    root.g = g;
    root.key = canonical_key(g);
    root.depth = 0;
    for (auto& [eid, ed] : g.edges()) root.edge_tracking[eid] = eid;
    for (auto& [vid, vd] : g.vertices()) root.vertex_tracking[vid] = vid;
    atlas.nodes.push_back(root);
    atlas.index[root.key.bytes] = 0;

    moves::MoveBudget mb;
    mb.max_label = budget.max_label;
    mb.max_divisors = budget.max_divisors;

    std::deque<NodeId> frontier{0};
    int threads = thread_cap();
    while (!frontier.empty()) {
        NodeId nid = frontier.front();
        frontier.pop_front();
        ++atlas.explored;
        bool trunc = false;
        std::vector<moves::MoveRecord> recs;
        try {
            recs = moves::admissible_moves(atlas.nodes[nid].g, mb, &trunc);
        } catch (const Error&) {
            atlas.truncated = true;
            continue;
        }
        if (trunc) atlas.truncated = true;
        // evaluate candidate successors (optionally in parallel), merge in order
        struct Cand {
            Graph h;
            CanonKey key;
        };
        std::vector<Cand> cands(recs.size());
        auto eval = [&](size_t i) {
            cands[i].h = moves::apply_move(atlas.nodes[nid].g, recs[i]);
            cands[i].key = canonical_key(cands[i].h);
        };
        if (threads > 1 && recs.size() > 1) {
            std::vector<std::future<void>> futs;
            std::atomic<size_t> next{0};
            for (int t = 0; t < std::min<int>(threads, (int)recs.size()); ++t)
                futs.push_back(std::async(std::launch::async, [&]() {
                    for (size_t i = next.fetch_add(1); i < recs.size(); i = next.fetch_add(1))
                        eval(i);
                }));
            for (auto& f : futs) f.get();
        } else {
            for (size_t i = 0; i < recs.size(); ++i) eval(i);
        }
        for (size_t i = 0; i < recs.size(); ++i) {
            const auto& rec = recs[i];
            const auto& cand = cands[i];
            NodeId target;
            auto it = atlas.index.find(cand.key.bytes);
            if (it != atlas.index.end()) {
                target = it->second;
            } else if (atlas.nodes.size() < budget.max_nodes) {
                AtlasNode node;
                node.g = cand.h;
                node.key = cand.key;
                node.depth = atlas.nodes[nid].depth + 1;
                target = (NodeId)atlas.nodes.size();
                atlas.nodes.push_back(node);
                atlas.index[cand.key.bytes] = target;
                frontier.push_back(target);
            } else {
                atlas.truncated = true;
                continue;
            }
            Arc arc;
            arc.from = nid;
            arc.to = target;
            arc.rec = rec;
            auto iso_e = transport_edges(cand.key, atlas.nodes[target].key);
            auto iso_v = transport_vertices(cand.key, atlas.nodes[target].key);
            for (auto& [eid, ed] : atlas.nodes[nid].g.edges())
                if (!rec.destroyed_edges.count(eid)) arc.edge_map[eid] = iso_e.at(eid);
            for (auto& [vid, vd] : atlas.nodes[nid].g.vertices())
                if (!rec.destroyed_vertices.count(vid)) arc.vertex_map[vid] = iso_v.at(vid);
            int arc_idx = (int)atlas.arcs.size();
            atlas.arcs.push_back(arc);
            atlas.nodes[nid].arcs_out.push_back(arc_idx);
            // tracking into new nodes (first-discovery semantics)
            AtlasNode& tgt = atlas.nodes[target];
            for (auto& [root_id, cur] : atlas.nodes[nid].edge_tracking) {
                auto jt = arc.edge_map.find(cur);
                if (jt == arc.edge_map.end()) continue;
                auto existing = tgt.edge_tracking.find(root_id);
                if (existing == tgt.edge_tracking.end())
                    tgt.edge_tracking[root_id] = jt->second;
                else if (existing->second != jt->second)
                    atlas.tracking_conflict = true;
            }
            for (auto& [root_id, cur] : atlas.nodes[nid].vertex_tracking) {
                auto jt = arc.vertex_map.find(cur);
                if (jt == arc.vertex_map.end()) continue;
                auto existing = tgt.vertex_tracking.find(root_id);
                if (existing == tgt.vertex_tracking.end())
                    tgt.vertex_tracking[root_id] = jt->second;
                else if (existing->second != jt->second)
                    atlas.tracking_conflict = true;
            }
        }
    }
    atlas.closed = !atlas.truncated;
    return atlas;
}

std::string atlas_dot(const Atlas& atlas) {
    std::ostringstream os;
    os << "digraph atlas {\n";
    for (size_t i = 0; i < atlas.nodes.size(); ++i) {
        os << "  n" << i << " [label=\"";
        std::string s = serialize_graph(atlas.nodes[i].g);
        for (char c : s) {
            if (c == '\n')
                os << "\\n";
            else if (c == '"')
                os << "\\\"";
            else
                os << c;
        }
        os << "\"];\n";
    }
    for (const Arc& a : atlas.arcs)
        os << "  n" << a.from << " -> n" << a.to << " [label=\"" << a.rec.line << "\"];\n";
    os << "}\n";
    return os.str();
}

std::string atlas_trace(const Atlas& atlas) {
    std::ostringstream os;
    for (const Arc& a : atlas.arcs) os << a.from << " -> " << a.to << ": " << a.rec.line << "\n";
    return os.str();
}

namespace {

// state-space walk over (node, live id) pairs following arcs that preserve
// the tracked orbit
struct StateWalk {
    const Atlas& atlas;
    bool edges;  // walking an edge orbit (else a vertex orbit)
    std::map<std::pair<NodeId, int>, std::pair<std::pair<NodeId, int>, int>> parent;
    std::vector<std::pair<NodeId, int>> order;

    StateWalk(const Atlas& a, bool edges, NodeId start_node, int start_id)
        : atlas(a), edges(edges) {
        std::deque<std::pair<NodeId, int>> q;
        auto s0 = std::make_pair(start_node, start_id);
        parent[s0] = {{-1, -1}, -1};
        q.push_back(s0);
        order.push_back(s0);
        while (!q.empty()) {
            auto [nid, cur] = q.front();
            q.pop_front();
            for (int ai : atlas.nodes[nid].arcs_out) {
                const Arc& arc = atlas.arcs[ai];
                int next_id;
                if (edges) {
                    auto it = arc.edge_map.find(cur);
                    if (it == arc.edge_map.end()) continue;  // orbit vanishes: not preserving
                    next_id = it->second;
                } else {
                    auto it = arc.vertex_map.find(cur);
                    if (it == arc.vertex_map.end()) continue;
                    next_id = it->second;
                }
                auto st = std::make_pair(arc.to, next_id);
                if (parent.count(st)) continue;
                parent[st] = {{nid, cur}, ai};
                order.push_back(st);
                q.push_back(st);
            }
        }
    }

    std::vector<std::string> trace_to(std::pair<NodeId, int> st) const {
        std::vector<std::string> lines;
        while (true) {
            auto it = parent.at(st);
            if (it.second < 0) break;
            lines.push_back(atlas.arcs[it.second].rec.line);
            st = it.first;
        }
        std::reverse(lines.begin(), lines.end());
        return lines;
    }
};

}  // namespace

TriState global_property(const Atlas& atlas, EdgeId e, GlobalProp prop) {
    if (!atlas.root().g.has_edge(e))
        throw Error(ErrorKind::UntrackedEdge, "global_property: edge not in the root graph");
    TriState out;
    out.budget_used = atlas.nodes.size();
    moves::MoveBudget mb;  // local re-enumeration per node; caps match explore's defaults
    StateWalk walk(atlas, true, 0, e);
    for (auto& st : walk.order) {
        const AtlasNode& node = atlas.nodes[st.first];
        EdgeId cur = st.second;
        if (prop == GlobalProp::Psa) {
            for (bool rev : {false, true}) {
                if (moves::local_kind(node.g, {cur, rev}).pre_ascending) {
                    out.verdict = Verdict::Proven;
                    out.witness.trace = walk.trace_to(st);
                    out.witness.note =
                        "edge " + node.g.edge(cur).name + (rev ? "~" : "") + " is pre-ascending";
                    return out;
                }
            }
            continue;
        }
        std::vector<moves::MoveRecord> recs;
        try {
            recs = moves::admissible_moves(node.g, mb);
        } catch (const Error&) {
            continue;
        }
        if (prop == GlobalProp::Slippery || prop == GlobalProp::TwoSlippery) {
            std::set<std::pair<EdgeId, bool>> sliders;
            std::string first_line;
            for (const auto& r : recs)
                if (r.kind == moves::MoveRecord::Kind::Slide && r.e.edge == cur) {
                    sliders.insert({r.f.edge, r.f.rev});
                    if (first_line.empty()) first_line = r.line;
                }
            bool hit = (prop == GlobalProp::Slippery) ? !sliders.empty() : sliders.size() >= 2;
            if (hit) {
                out.verdict = Verdict::Proven;
                out.witness.trace = walk.trace_to(st);
                if (prop == GlobalProp::Slippery) {
                    out.witness.trace.push_back(first_line);
                    out.witness.note = "ends with a slide along the tracked orbit";
                } else {
                    std::ostringstream note;
                    note << sliders.size() << " simultaneous slides along the tracked orbit";
                    out.witness.note = note.str();
                }
                return out;
            }
        } else if (prop == GlobalProp::Vanishing) {
            for (const auto& r : recs)
                if (r.kind == moves::MoveRecord::Kind::AInverseMove && r.f.edge == cur) {
                    out.verdict = Verdict::Proven;
                    out.witness.trace = walk.trace_to(st);
                    out.witness.trace.push_back(r.line);
                    out.witness.note = "ends with an inverse A-move in which the orbit vanishes";
                    return out;
                }
        }
    }
    if (atlas.closed && !atlas.tracking_conflict) {
        out.verdict = Verdict::Refuted;
        out.evidence = "closed-atlas";
    } else {
        out.verdict = Verdict::Unknown;
        out.evidence = "budget exhausted";
    }
    return out;
}

TriState global_property(const Graph& g, EdgeId e, GlobalProp prop, const Budget& budget) {
    return global_property(explore(g, budget), e, prop);
}

TriState psad(const Atlas& atlas, EdgeId e) { return global_property(atlas, e, GlobalProp::Psa); }

DeadEndResult dead_end(const Atlas& atlas, VertexId v) {
    if (!atlas.root().g.has_vertex(v))
        throw Error(ErrorKind::UntrackedEdge, "dead_end: vertex not in the root graph");
    DeadEndResult res;
    res.status.budget_used = atlas.nodes.size();
    // memoized slippery/psa per (node, edge) pair, evaluated in the same atlas
    std::map<std::pair<NodeId, EdgeId>, Verdict> slip_memo;
    auto slippery_or_psad = [&](NodeId nid, EdgeId f) -> Verdict {
        auto key = std::make_pair(nid, f);
        auto it = slip_memo.find(key);
        if (it != slip_memo.end()) return it->second;
        // walk the whole space from this node for the orbit of f
        Verdict v_out = Verdict::Unknown;
        moves::MoveBudget mb;
        StateWalk walk(atlas, true, nid, f);
        bool proven = false;
        for (auto& st : walk.order) {
            const AtlasNode& node = atlas.nodes[st.first];
            EdgeId cur = st.second;
            for (bool rev : {false, true})
                if (moves::local_kind(node.g, {cur, rev}).pre_ascending) proven = true;
            if (proven) break;
            std::vector<moves::MoveRecord> recs;
            try {
                recs = moves::admissible_moves(node.g, mb);
            } catch (const Error&) {
                continue;
            }
            for (const auto& r : recs)
                if (r.kind == moves::MoveRecord::Kind::Slide && r.e.edge == cur) proven = true;
            if (proven) break;
        }
        if (proven)
            v_out = Verdict::Proven;
        else if (atlas.closed && !atlas.tracking_conflict)
            v_out = Verdict::Refuted;
        slip_memo[key] = v_out;
        return v_out;
    };

    StateWalk walk(atlas, false, 0, v);
    bool any_unknown = false;
    for (auto& st : walk.order) {
        const AtlasNode& node = atlas.nodes[st.first];
        VertexId cur = st.second;
        // a vanishing vertex is never a dead end
        for (int ai : node.arcs_out) {
            const Arc& arc = atlas.arcs[ai];
            if (arc.rec.kind == moves::MoveRecord::Kind::AInverseMove &&
                arc.rec.destroyed_vertices.count(cur)) {
                res.status.verdict = Verdict::Refuted;
                res.status.evidence = "the vertex orbit vanishes";
                return res;
            }
        }
        Lattice gv = Lattice::full(node.g.vertex(cur).rank);
        auto ends = node.g.ends_at(cur);
        std::sort(ends.begin(), ends.end(), [&](OrientedEdge a, OrientedEdge b) {
            return moves::oriented_name(node.g, a) < moves::oriented_name(node.g, b);
        });
        bool found_wall = false;
        bool wall_unknown = false;
        for (OrientedEdge f : ends) {
            Lattice lf = node.g.image_initial(f);
            if (!(compare(lf, gv).rel == Relation::ProperSub)) continue;  // bullet 1
            bool joins_ok = true;
            for (OrientedEdge h : ends) {
                if (h.edge == f.edge) continue;
                if (!join(node.g.image_initial(h), lf).is_full()) {
                    joins_ok = false;
                    break;
                }
            }
            if (!joins_ok) continue;  // bullet 3
            bool exists_g = false;
            for (OrientedEdge gp : ends) {
                if (gp.edge == f.edge) continue;
                Lattice lg = node.g.image_initial(gp);
                if (!(compare(lg, gv).rel == Relation::ProperSub)) continue;
                bool dominates = true;
                for (OrientedEdge h : ends) {
                    if (h.edge == f.edge) continue;
                    if (!lg.contains(node.g.image_initial(h))) {
                        dominates = false;
                        break;
                    }
                }
                if (dominates) {
                    exists_g = true;
                    break;
                }
            }
            if (!exists_g) continue;  // bullet 4
            Verdict slip = slippery_or_psad(st.first, f.edge);  // bullet 2
            if (slip == Verdict::Proven) {
                found_wall = true;
                if (!res.walls.count(st.first)) res.walls[st.first] = f;
                break;
            }
            if (slip == Verdict::Unknown) wall_unknown = true;
        }
        if (!found_wall) {
            if (wall_unknown) {
                any_unknown = true;
            } else {
                res.status.verdict = Verdict::Refuted;
                res.status.evidence =
                    "no qualifying wall at a reachable tree (node " + std::to_string(st.first) +
                    ")";
                return res;
            }
        }
    }
    if (any_unknown || !atlas.closed || atlas.tracking_conflict) {
        res.status.verdict = Verdict::Unknown;
        res.status.evidence = "budget exhausted";
    } else {
        res.status.verdict = Verdict::Proven;
        res.status.witness.note = "every reachable tree carries a qualifying wall";
    }
    return res;
}

DeadEndResult dead_end(const Graph& g, VertexId v, const Budget& budget) {
    return dead_end(explore(g, budget), v);
}

Graph checked_blow_up(const Graph& g, VertexId v, const Budget& budget, bool force,
                      moves::MoveRecord* rec) {
    if (force) {
        auto ends = g.ends_at(v);
        if (ends.empty()) throw Error(ErrorKind::NotADeadEnd, "no edge end to use as a wall");
        std::sort(ends.begin(), ends.end(), [&](OrientedEdge a, OrientedEdge b) {
            return moves::oriented_name(g, a) < moves::oriented_name(g, b);
        });
        return moves::blow_up(g, v, ends[0], rec);
    }
    DeadEndResult de = dead_end(g, v, budget);
    if (de.status.verdict != Verdict::Proven)
        throw Error(ErrorKind::NotADeadEnd, "vertex is not a proven dead end");
    return moves::blow_up(g, v, de.walls.at(0), rec);
}

Graph replay(const Graph& root, const Witness& w) {
    return moves::apply_trace(root, w.trace);
}

}  // namespace classify
}  // namespace jsjforge
