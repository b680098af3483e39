#include "jsjforge/moves.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace jsjforge {
namespace moves {

namespace {

void forbid_composite(const Graph& g, VertexId v) {
    if (g.vertex(v).composite)
        throw Error(ErrorKind::CompositeVertex, "no moves on composite vertices");
}

std::string basis_text(const Lattice& l) {
    std::ostringstream os;
    os << "basis " << l.basis().rows() << " " << l.basis().cols();
    for (int r = 0; r < l.basis().rows(); ++r)
        for (int c = 0; c < l.basis().cols(); ++c) os << " " << l.basis().at(r, c).get_str();
    return os.str();
}

}  // namespace

std::string oriented_name(const Graph& g, OrientedEdge d) {
    return g.edge(d.edge).name + (d.rev ? "~" : "");
}

EdgeKind local_kind(const Graph& g, OrientedEdge e) {
    if (!g.has_edge(e.edge)) throw Error(ErrorKind::EdgeNotFound, "local_kind: no such edge");
    EdgeKind k;
    bool loop = g.is_loop(e.edge);
    Lattice gi = g.image_initial(e);
    Lattice gt = g.image_terminal(e);
    Lattice gv = Lattice::full(g.vertex(g.initial(e)).rank);
    Lattice gw = Lattice::full(g.vertex(g.terminal(e)).rank);
    k.reduced = loop || (gi != gv && gt != gw);
    if (loop) {
        k.ascending = (gi == gv);
        k.strictly_ascending = k.ascending && gt != gw;
        k.toric = (gi == gv && gt == gw);
        k.pre_ascending = gi.contains(gt) && gi != gt;
        k.pre_descending = gt.contains(gi) && gi != gt;
    }
    return k;
}

bool edge_reduced(const Graph& g, EdgeId e) { return local_kind(g, {e, false}).reduced; }

bool graph_reduced(const Graph& g) {
    for (auto& [vid, vd] : g.vertices())
        if (vd.composite) return false;
    for (auto& [eid, ed] : g.edges())
        if (!edge_reduced(g, eid)) return false;
    return true;
}

Graph slide(const Graph& g, OrientedEdge f, OrientedEdge e, MoveRecord* rec) {
    if (f.edge == e.edge) throw Error(ErrorKind::SelfSlide, "cannot slide an edge along itself");
    if (!g.has_edge(f.edge) || !g.has_edge(e.edge))
        throw Error(ErrorKind::EdgeNotFound, "slide: no such edge");
    VertexId v = g.terminal(f);
    if (v != g.initial(e)) throw Error(ErrorKind::NotAdjacent, "slide: t(f) is not o(e)");
    forbid_composite(g, v);
    forbid_composite(g, g.initial(f));
    forbid_composite(g, g.terminal(e));
    if (!g.image_initial(e).contains(g.image_terminal(f)))
        throw Error(ErrorKind::StabilizerNotIncluded,
                    "slide: stabilizer of the sliding end escapes the slide path");
    // new terminal injection of f: inj_t(e) o inj_o(e)^-1 o inj_t(f)
    IntMat x;
    if (!solve_exact(g.inj_initial(e), g.inj_terminal(f), x))
        throw Error(ErrorKind::Internal, "slide: transport failed");
    Graph out = g;
    IntMat new_inj = g.inj_terminal(e).mul(x);
    EdgeData& fd = out.edge_mut(f.edge);
    if (f.rev) {
        fd.origin = g.terminal(e);
        fd.inj_origin = new_inj;
    } else {
        fd.terminus = g.terminal(e);
        fd.inj_terminus = new_inj;
    }
    out.renormalize_edge(f.edge);
    if (rec) {
        rec->kind = MoveRecord::Kind::Slide;
        rec->f = f;
        rec->e = e;
        rec->line = "slide " + oriented_name(g, f) + " " + oriented_name(g, e);
    }
    return out;
}

Graph induct(const Graph& g, OrientedEdge e, const Lattice& a, MoveRecord* rec,
             bool allow_trivial) {
    EdgeKind k = local_kind(g, e);
    if (!k.strictly_ascending)
        throw Error(ErrorKind::NotStrictlyAscending, "induction needs a strictly ascending loop");
    VertexId v = g.initial(e);
    forbid_composite(g, v);
    Lattice omega = g.image_terminal(e);
    Lattice gv = Lattice::full(g.vertex(v).rank);
    if (a.ambient_rank() != g.vertex(v).rank || !a.contains(omega) || !gv.contains(a))
        throw Error(ErrorKind::GroupOutOfRange, "induction group must satisfy w(G_e) <= A <= G_v");
    // A = G_v is the induction with the edge group itself: the identity move.
    if (a.is_full() && !allow_trivial)
        throw Error(ErrorKind::TrivialInduction, "trivial induction");
    Graph out = g;
    IntMat ma = a.basis();  // n x n, full rank
    for (auto& [eid, ed] : g.edges()) {
        if (eid == e.edge) continue;  // loop labels unchanged
        bool touched = false;
        if (ed.origin == v) {
            out.edge_mut(eid).inj_origin = ma.mul(ed.inj_origin);
            touched = true;
        }
        if (ed.terminus == v) {
            out.edge_mut(eid).inj_terminus = ma.mul(ed.inj_terminus);
            touched = true;
        }
        if (touched) out.renormalize_edge(eid);
    }
    if (rec) {
        rec->kind = MoveRecord::Kind::Induction;
        rec->e = e;
        rec->lattice = a;
        if (a.ambient_rank() == 1)
            rec->line = "induct " + oriented_name(g, e) + " " + a.basis().at(0, 0).get_str();
        else
            rec->line = "induct " + oriented_name(g, e) + " " + basis_text(a);
    }
    return out;
}

Graph a_move(const Graph& g, OrientedEdge e, MoveRecord* rec) {
    EdgeKind k = local_kind(g, e);
    if (k.ascending) throw Error(ErrorKind::IsAscending, "A-move needs a non-ascending loop");
    if (!k.pre_ascending)
        throw Error(ErrorKind::NotPreAscending, "A-move needs a pre-ascending loop");
    VertexId v = g.initial(e);
    forbid_composite(g, v);
    int r = g.edge(e.edge).edge_rank;
    IntMat alpha = g.inj_initial(e);
    IntMat omega = g.inj_terminal(e);
    IntMat x;  // alpha * x = omega
    if (!solve_exact(alpha, omega, x))
        throw Error(ErrorKind::Internal, "a_move: omega not inside alpha image");
    Graph out = g;
    VertexId w2 = out.add_vertex(r, out.fresh_vertex_name("w"));
    // the loop keeps its id: it becomes the strictly ascending loop [I : x] at w2
    EdgeData& ed = out.edge_mut(e.edge);
    ed.origin = w2;
    ed.terminus = w2;
    if (e.rev) {
        ed.inj_terminus = IntMat::identity(r);
        ed.inj_origin = x;
    } else {
        ed.inj_origin = IntMat::identity(r);
        ed.inj_terminus = x;
    }
    out.renormalize_edge(e.edge);
    // connecting edge w2 -[x : alpha]- v
    EdgeId f = out.add_edge(w2, v, x, alpha, out.fresh_edge_name("c"));
    if (rec) {
        rec->kind = MoveRecord::Kind::AMove;
        rec->e = e;
        rec->created_edges = {f};
        rec->created_vertices = {w2};
        rec->line = "amove " + oriented_name(g, e);
    }
    return out;
}

Graph a_inverse_move(const Graph& g, OrientedEdge e, OrientedEdge f, MoveRecord* rec) {
    auto fail = [](const std::string& why) {
        throw Error(ErrorKind::PreconditionsFail, "a_inverse_move: " + why);
    };
    EdgeKind k = local_kind(g, e);
    if (!k.strictly_ascending) fail("the loop is not strictly ascending");
    VertexId w = g.initial(e);
    forbid_composite(g, w);
    if (f.edge == e.edge) fail("f must differ from the loop");
    if (g.is_loop(f.edge)) fail("the vanishing edge may not be a loop");
    if (g.terminal(f) != w) fail("f must end at the loop vertex");
    VertexId u = g.initial(f);
    forbid_composite(g, u);
    Lattice lf = g.image_terminal(f);
    if (lf.rank() != g.vertex(w).rank) fail("G_f has infinite index in G_w");
    if (!lf.contains(g.image_terminal(e))) fail("G_f does not contain the loop's terminal image");
    for (OrientedEdge h : g.ends_at(w)) {
        if (h.edge == e.edge || h.edge == f.edge) continue;
        if (!lf.contains(g.image_initial(h))) fail("an edge end at w escapes G_f");
    }
    IntMat fw = g.inj_terminal(f);  // n_w x n_w, full rank
    IntMat fu = g.inj_initial(f);
    // Undoing the induction that produced f leaves the loop's injections
    // unchanged and divides every other end at w through f_w; the collapse of
    // f then composes everything with f_u.
    auto through_f = [&](const IntMat& inj, bool is_loop_end) {
        if (is_loop_end) return fu.mul(inj);
        IntMat x;
        if (!solve_exact(fw, inj, x))
            throw Error(ErrorKind::Internal, "a_inverse_move: transport failed");
        return fu.mul(x);
    };
    Graph out = g;
    std::vector<OrientedEdge> ends = g.ends_at(w);
    for (OrientedEdge h : ends) {
        if (h.edge == f.edge) continue;
        IntMat transported = through_f(g.inj_initial(h), h.edge == e.edge);
        EdgeData& hd = out.edge_mut(h.edge);
        if (h.rev) {
            hd.terminus = u;
            hd.inj_terminus = transported;
        } else {
            hd.origin = u;
            hd.inj_origin = transported;
        }
    }
    for (OrientedEdge h : ends)
        if (h.edge != f.edge && out.has_edge(h.edge)) out.renormalize_edge(h.edge);
    out.remove_edge(f.edge);
    out.remove_vertex(w);
    if (rec) {
        rec->kind = MoveRecord::Kind::AInverseMove;
        rec->e = e;
        rec->f = f;
        rec->destroyed_edges = {f.edge};
        rec->destroyed_vertices = {w};
        rec->line = "ainv " + oriented_name(g, e) + " " + oriented_name(g, f);
    }
    return out;
}

Graph collapse(const Graph& g, EdgeId e, MoveRecord* rec) {
    if (!g.has_edge(e)) throw Error(ErrorKind::EdgeNotFound, "collapse: no such edge");
    if (g.is_loop(e)) throw Error(ErrorKind::LoopCollapse, "collapsing a loop is forbidden");
    Graph out = g;
    bool reduced = edge_reduced(g, e);
    VertexId absorbed;
    if (!reduced) {
        // orient d with full image at its initial vertex; absorb that vertex
        OrientedEdge d{e, false};
        if (!g.image_initial(d).is_full()) d = d.reverse();
        VertexId a = g.initial(d), b = g.terminal(d);
        absorbed = a;
        IntMat da = g.inj_initial(d), db = g.inj_terminal(d);
        for (OrientedEdge h : g.ends_at(a)) {
            if (h.edge == e) continue;
            IntMat x;
            if (!solve_exact(da, g.inj_initial(h), x))
                throw Error(ErrorKind::Internal, "collapse: transport failed");
            IntMat transported = db.mul(x);
            EdgeData& hd = out.edge_mut(h.edge);
            if (h.rev) {
                hd.terminus = b;
                hd.inj_terminus = transported;
            } else {
                hd.origin = b;
                hd.inj_origin = transported;
            }
        }
        for (OrientedEdge h : g.ends_at(a))
            if (h.edge != e) out.renormalize_edge(h.edge);
        out.remove_edge(e);
        out.remove_vertex(a);
    } else {
        // composite merge: the result is only usable inside JSJ reports
        VertexId a = g.edge(e).origin, b = g.edge(e).terminus;
        absorbed = a;
        for (OrientedEdge h : g.ends_at(a)) {
            if (h.edge == e) continue;
            EdgeData& hd = out.edge_mut(h.edge);
            if (h.rev)
                hd.terminus = b;
            else
                hd.origin = b;
        }
        out.remove_edge(e);
        out.remove_vertex(a);
        out.vertex_mut(b).composite = true;
    }
    if (rec) {
        rec->kind = MoveRecord::Kind::Collapse;
        rec->e = {e, false};
        rec->destroyed_edges = {e};
        rec->destroyed_vertices = {absorbed};
        rec->line = "collapse " + g.edge(e).name;
    }
    return out;
}

Graph expand(const Graph& g, VertexId v, const Lattice& h, const std::vector<OrientedEdge>& f_set,
             MoveRecord* rec) {
    if (!g.has_vertex(v)) throw Error(ErrorKind::EdgeNotFound, "expand: no such vertex");
    forbid_composite(g, v);
    Lattice gv = Lattice::full(g.vertex(v).rank);
    if (h.ambient_rank() != g.vertex(v).rank || !gv.contains(h) || h.rank() == 0)
        throw Error(ErrorKind::GroupOutOfRange, "expansion group must sit inside G_v");
    std::set<EdgeId> seen;
    for (OrientedEdge f : f_set) {
        if (g.initial(f) != v)
            throw Error(ErrorKind::EdgeNotAtVertex, "expansion end is not at the vertex");
        if (!seen.insert(f.edge).second)
            throw Error(ErrorKind::EdgeNotAtVertex, "expansion set repeats an edge");
        if (!h.contains(g.image_initial(f)))
            throw Error(ErrorKind::GroupOutOfRange, "expansion group must contain G_f");
    }
    Graph out = g;
    int rh = h.rank();
    VertexId vt = out.add_vertex(rh, out.fresh_vertex_name("x"));
    for (OrientedEdge f : f_set) {
        IntMat x;
        if (!solve_exact(h.basis(), g.inj_initial(f), x))
            throw Error(ErrorKind::Internal, "expand: transport failed");
        EdgeData& fd = out.edge_mut(f.edge);
        if (f.rev) {
            fd.terminus = vt;
            fd.inj_terminus = x;
        } else {
            fd.origin = vt;
            fd.inj_origin = x;
        }
        out.renormalize_edge(f.edge);
    }
    EdgeId enew = out.add_edge(vt, v, IntMat::identity(rh), h.basis(), out.fresh_edge_name("x"));
    if (rec) {
        rec->kind = MoveRecord::Kind::Expansion;
        rec->vertex = v;
        rec->lattice = h;
        rec->ends = f_set;
        rec->created_edges = {enew};
        rec->created_vertices = {vt};
        std::ostringstream os;
        os << "expand " << g.vertex(v).name << " " << basis_text(h) << " ends";
        for (OrientedEdge f : f_set) os << " " << oriented_name(g, f);
        rec->line = os.str();
    }
    return out;
}

Graph blow_up(const Graph& g, VertexId v, OrientedEdge wall, MoveRecord* rec) {
    Graph out = expand(g, v, Lattice::full(g.vertex(v).rank), {wall}, rec);
    if (rec) {
        rec->kind = MoveRecord::Kind::BlowUp;
        rec->line = "blowup " + g.vertex(v).name + " " + oriented_name(g, wall);
    }
    return out;
}

std::pair<Graph, std::vector<EdgeId>> reduce(const Graph& g) {
    Graph cur = g;
    std::vector<EdgeId> collapsed;
    while (true) {
        std::vector<EdgeId> cands;
        for (auto& [eid, ed] : cur.edges())
            if (!cur.is_loop(eid) && !edge_reduced(cur, eid)) cands.push_back(eid);
        if (cands.empty()) break;
        CanonKey key = canonical_key(cur);
        std::sort(cands.begin(), cands.end(),
                  [&](EdgeId a, EdgeId b) { return key.edge_pos.at(a) < key.edge_pos.at(b); });
        collapsed.push_back(cands[0]);
        cur = collapse(cur, cands[0]);
    }
    return {cur, collapsed};
}

std::vector<MoveRecord> admissible_moves(const Graph& g, const MoveBudget& budget,
                                         bool* truncated) {
    if (!graph_reduced(g))
        throw Error(ErrorKind::NotReduced, "admissible_moves: graph not reduced");
    bool trunc = false;
    std::vector<MoveRecord> out;
    auto consider = [&](const std::function<Graph(MoveRecord&)>& apply) {
        MoveRecord rec;
        Graph res;
        try {
            res = apply(rec);
        } catch (const Error&) {
            return;
        }
        if (!graph_reduced(res)) return;
        if (budget.max_label > 0 && cmp(res.max_abs_entry(), budget.max_label) > 0) {
            trunc = true;
            return;
        }
        out.push_back(rec);
    };

    std::vector<OrientedEdge> all;
    for (auto& [eid, ed] : g.edges()) {
        all.push_back({eid, false});
        all.push_back({eid, true});
    }
    for (OrientedEdge f : all)
        for (OrientedEdge e : all) {
            if (f.edge == e.edge) continue;
            if (g.terminal(f) != g.initial(e)) continue;
            consider([&](MoveRecord& rec) { return slide(g, f, e, &rec); });
        }
    for (OrientedEdge e : all) {
        EdgeKind k = local_kind(g, e);
        if (!k.strictly_ascending) continue;
        Lattice omega = g.image_terminal(e);
        std::vector<Lattice> mids;
        try {
            mids = intermediate_lattices(omega, budget.max_divisors);
        } catch (const Error&) {
            trunc = true;
            continue;
        }
        for (const Lattice& a : mids) {
            if (a.is_full()) continue;  // trivial induction
            consider([&](MoveRecord& rec) { return induct(g, e, a, &rec); });
        }
    }
    for (OrientedEdge e : all) {
        EdgeKind k = local_kind(g, e);
        if (!k.pre_ascending || k.ascending) continue;
        consider([&](MoveRecord& rec) { return a_move(g, e, &rec); });
    }
    for (OrientedEdge e : all) {
        EdgeKind k = local_kind(g, e);
        if (!k.strictly_ascending) continue;
        for (OrientedEdge f : all) {
            if (f.edge == e.edge || g.is_loop(f.edge)) continue;
            if (g.terminal(f) != g.initial(e)) continue;
            consider([&](MoveRecord& rec) { return a_inverse_move(g, e, f, &rec); });
        }
    }
    std::sort(out.begin(), out.end(),
              [](const MoveRecord& a, const MoveRecord& b) { return a.line < b.line; });
    out.erase(
        std::unique(out.begin(), out.end(),
                    [](const MoveRecord& a, const MoveRecord& b) { return a.line == b.line; }),
        out.end());
    if (truncated) *truncated = trunc;
    return out;
}

Graph apply_move(const Graph& g, const MoveRecord& rec) {
    MoveRecord scratch;
    switch (rec.kind) {
        case MoveRecord::Kind::Slide:
            return slide(g, rec.f, rec.e, &scratch);
        case MoveRecord::Kind::Induction:
            return induct(g, rec.e, rec.lattice, &scratch);
        case MoveRecord::Kind::AMove:
            return a_move(g, rec.e, &scratch);
        case MoveRecord::Kind::AInverseMove:
            return a_inverse_move(g, rec.e, rec.f, &scratch);
        case MoveRecord::Kind::Collapse:
            return collapse(g, rec.e.edge, &scratch);
        case MoveRecord::Kind::Expansion:
            return expand(g, rec.vertex, rec.lattice, rec.ends, &scratch);
        case MoveRecord::Kind::BlowUp:
            return blow_up(g, rec.vertex, rec.ends.at(0), &scratch);
    }
    throw Error(ErrorKind::Internal, "apply_move: bad record");
}

namespace {

OrientedEdge parse_oriented(const Graph& g, const std::string& tok) {
    std::string name = tok;
    bool rev = false;
    if (!name.empty() && name.back() == '~') {
        rev = true;
        name.pop_back();
    }
    auto e = g.edge_by_name(name);
    if (!e) throw Error(ErrorKind::EdgeNotFound, "trace refers to unknown edge " + name);
    return {*e, rev};
}

Lattice parse_basis(const std::vector<std::string>& toks, size_t& i) {
    if (i >= toks.size() || toks[i] != "basis")
        throw Error(ErrorKind::ParseError, "trace: expected 'basis'");
    ++i;
    int r = std::stoi(toks.at(i)), c = std::stoi(toks.at(i + 1));
    i += 2;
    IntMat m(r, c);
    for (int rr = 0; rr < r; ++rr)
        for (int cc = 0; cc < c; ++cc) m.at(rr, cc) = Int(toks.at(i++));
    return Lattice(r, m);
}

}  // namespace

Graph apply_trace_line(const Graph& g, const std::string& line, MoveRecord* rec) {
    std::istringstream is(line);
    std::vector<std::string> toks;
    std::string t;
    while (is >> t) toks.push_back(t);
    if (toks.empty()) throw Error(ErrorKind::ParseError, "empty trace line");
    MoveRecord scratch;
    MoveRecord* r = rec ? rec : &scratch;
    const std::string& kw = toks[0];
    if (kw == "slide" && toks.size() == 3)
        return slide(g, parse_oriented(g, toks[1]), parse_oriented(g, toks[2]), r);
    if (kw == "induct" && toks.size() >= 3) {
        OrientedEdge e = parse_oriented(g, toks[1]);
        if (toks.size() == 3) return induct(g, e, Lattice::rank1(Int(toks[2])), r);
        size_t i = 2;
        return induct(g, e, parse_basis(toks, i), r);
    }
    if (kw == "amove" && toks.size() == 2) return a_move(g, parse_oriented(g, toks[1]), r);
    if (kw == "ainv" && toks.size() == 3)
        return a_inverse_move(g, parse_oriented(g, toks[1]), parse_oriented(g, toks[2]), r);
    if (kw == "collapse" && toks.size() == 2)
        return collapse(g, parse_oriented(g, toks[1]).edge, r);
    if (kw == "blowup" && toks.size() == 3) {
        auto v = g.vertex_by_name(toks[1]);
        if (!v) throw Error(ErrorKind::EdgeNotFound, "trace: unknown vertex " + toks[1]);
        return blow_up(g, *v, parse_oriented(g, toks[2]), r);
    }
    if (kw == "expand") {
        auto v = g.vertex_by_name(toks.at(1));
        if (!v) throw Error(ErrorKind::EdgeNotFound, "trace: unknown vertex " + toks[1]);
        size_t i = 2;
        Lattice h = parse_basis(toks, i);
        if (i >= toks.size() || toks[i] != "ends")
            throw Error(ErrorKind::ParseError, "trace: expected 'ends'");
        ++i;
        std::vector<OrientedEdge> ends;
        for (; i < toks.size(); ++i) ends.push_back(parse_oriented(g, toks[i]));
        return expand(g, *v, h, ends, r);
    }
    throw Error(ErrorKind::ParseError, "bad trace line: " + line);
}

Graph apply_trace(const Graph& g, const std::vector<std::string>& lines) {
    Graph cur = g;
    for (const auto& line : lines) cur = apply_trace_line(cur, line);
    return cur;
}

}  // namespace moves
}  // namespace jsjforge
