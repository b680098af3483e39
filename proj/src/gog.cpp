#include "jsjforge/gog.hpp"

#include <algorithm>
#include <queue>
#include <sstream>

namespace jsjforge {

VertexId Graph::add_vertex(int rank, const std::string& name) {
    if (rank < 1) throw Error(ErrorKind::ValidationError, "vertex rank must be positive");
    VertexId id = next_vertex_++;
    VertexData d;
    d.rank = rank;
    d.name = name.empty() ? ("v" + std::to_string(id)) : name;
    vertices_[id] = d;
    return id;
}

namespace {

// Normalize (inj_u, inj_w) by the right unimodular factor from the stacked
// column HNF, making the pair canonical for the edge-group frame.
void normalize_pair(IntMat& inj_u, IntMat& inj_w) {
    IntMat stacked = inj_u.vstack(inj_w);
    IntMat u;
    hnf_cols_transform(stacked, u);
    inj_u = inj_u.mul(u);
    inj_w = inj_w.mul(u);
}

}  // namespace

EdgeId Graph::add_edge(VertexId u, VertexId w, const IntMat& inj_u, const IntMat& inj_w,
                       const std::string& name) {
    if (!has_vertex(u) || !has_vertex(w))
        throw Error(ErrorKind::ValidationError, "edge endpoint does not exist");
    if (inj_u.cols() != inj_w.cols())
        throw Error(ErrorKind::ValidationError, "edge injections disagree on edge rank");
    if (inj_u.rows() != vertex(u).rank || inj_w.rows() != vertex(w).rank)
        throw Error(ErrorKind::ValidationError, "injection rows do not match vertex rank");
    if (inj_u.rank() != inj_u.cols() || inj_w.rank() != inj_w.cols())
        throw Error(ErrorKind::ValidationError, "injection is not of full column rank");
    EdgeId id = next_edge_++;
    EdgeData d;
    d.origin = u;
    d.terminus = w;
    d.edge_rank = inj_u.cols();
    d.inj_origin = inj_u;
    d.inj_terminus = inj_w;
    normalize_pair(d.inj_origin, d.inj_terminus);
    d.name = name.empty() ? ("e" + std::to_string(id)) : name;
    edges_[id] = d;
    return id;
}

EdgeId Graph::add_edge_rank1(VertexId u, VertexId w, long m, long n, const std::string& name) {
    IntMat mu(1, 1), mw(1, 1);
    mu.at(0, 0) = m;
    mw.at(0, 0) = n;
    return add_edge(u, w, mu, mw, name);
}

void Graph::remove_edge(EdgeId e) { edges_.erase(e); }

void Graph::remove_vertex(VertexId v) {
    for (auto& [eid, ed] : edges_)
        if (ed.origin == v || ed.terminus == v)
            throw Error(ErrorKind::Internal, "remove_vertex: vertex not isolated");
    vertices_.erase(v);
}

const VertexData& Graph::vertex(VertexId v) const {
    auto it = vertices_.find(v);
    if (it == vertices_.end()) throw Error(ErrorKind::EdgeNotFound, "no such vertex");
    return it->second;
}

VertexData& Graph::vertex_mut(VertexId v) {
    return const_cast<VertexData&>(static_cast<const Graph*>(this)->vertex(v));
}

const EdgeData& Graph::edge(EdgeId e) const {
    auto it = edges_.find(e);
    if (it == edges_.end()) throw Error(ErrorKind::EdgeNotFound, "no such edge");
    return it->second;
}

EdgeData& Graph::edge_mut(EdgeId e) {
    return const_cast<EdgeData&>(static_cast<const Graph*>(this)->edge(e));
}

bool Graph::is_loop(EdgeId e) const { return edge(e).origin == edge(e).terminus; }

VertexId Graph::initial(OrientedEdge d) const {
    return d.rev ? edge(d.edge).terminus : edge(d.edge).origin;
}

VertexId Graph::terminal(OrientedEdge d) const {
    return d.rev ? edge(d.edge).origin : edge(d.edge).terminus;
}

const IntMat& Graph::inj_initial(OrientedEdge d) const {
    return d.rev ? edge(d.edge).inj_terminus : edge(d.edge).inj_origin;
}

const IntMat& Graph::inj_terminal(OrientedEdge d) const {
    return d.rev ? edge(d.edge).inj_origin : edge(d.edge).inj_terminus;
}

void Graph::set_inj_initial(OrientedEdge d, const IntMat& m) {
    if (d.rev)
        edge_mut(d.edge).inj_terminus = m;
    else
        edge_mut(d.edge).inj_origin = m;
}

Lattice Graph::image_initial(OrientedEdge d) const {
    return Lattice(vertex(initial(d)).rank, inj_initial(d));
}

Lattice Graph::image_terminal(OrientedEdge d) const {
    return Lattice(vertex(terminal(d)).rank, inj_terminal(d));
}

Int Graph::label_initial(OrientedEdge d) const { return inj_initial(d).at(0, 0); }

std::vector<OrientedEdge> Graph::ends_at(VertexId v) const {
    std::vector<OrientedEdge> out;
    for (auto& [eid, ed] : edges_) {
        if (ed.origin == v) out.push_back({eid, false});
        if (ed.terminus == v) out.push_back({eid, true});
    }
    return out;
}

bool Graph::is_connected() const {
    if (vertices_.empty()) return false;
    std::set<VertexId> seen;
    std::queue<VertexId> q;
    q.push(vertices_.begin()->first);
    seen.insert(vertices_.begin()->first);
    while (!q.empty()) {
        VertexId v = q.front();
        q.pop();
        for (auto& [eid, ed] : edges_) {
            VertexId nb = -1;
            if (ed.origin == v) nb = ed.terminus;
            else if (ed.terminus == v) nb = ed.origin;
            else continue;
            if (seen.insert(nb).second) q.push(nb);
        }
    }
    return seen.size() == vertices_.size();
}

bool Graph::all_rank1() const {
    for (auto& [vid, vd] : vertices_)
        if (vd.rank != 1) return false;
    return true;
}

void Graph::validate() const {
    if (vertices_.empty()) throw Error(ErrorKind::ValidationError, "graph has no vertices");
    if (!is_connected()) throw Error(ErrorKind::ValidationError, "graph is not connected");
    for (auto& [eid, ed] : edges_) {
        if (ed.inj_origin.rank() != ed.edge_rank || ed.inj_terminus.rank() != ed.edge_rank)
            throw Error(ErrorKind::ValidationError, "rank-deficient injection on edge " + ed.name);
    }
}

std::string Graph::fresh_edge_name(const std::string& stem) const {
    for (int i = 0;; ++i) {
        std::string cand = stem + std::to_string(i);
        if (!edge_by_name(cand)) return cand;
    }
}

std::string Graph::fresh_vertex_name(const std::string& stem) const {
    for (int i = 0;; ++i) {
        std::string cand = stem + std::to_string(i);
        if (!vertex_by_name(cand)) return cand;
    }
}

std::optional<VertexId> Graph::vertex_by_name(const std::string& name) const {
    for (auto& [vid, vd] : vertices_)
        if (vd.name == name) return vid;
    return std::nullopt;
}

std::optional<EdgeId> Graph::edge_by_name(const std::string& name) const {
    for (auto& [eid, ed] : edges_)
        if (ed.name == name) return eid;
    return std::nullopt;
}

void Graph::renormalize_edge(EdgeId e) {
    EdgeData& ed = edge_mut(e);
    normalize_pair(ed.inj_origin, ed.inj_terminus);
}

Int Graph::max_abs_entry() const {
    Int m = 0;
    for (auto& [eid, ed] : edges_) {
        for (const IntMat* mat : {&ed.inj_origin, &ed.inj_terminus})
            for (int r = 0; r < mat->rows(); ++r)
                for (int c = 0; c < mat->cols(); ++c)
                    if (cmp(abs(mat->at(r, c)), m) > 0) m = abs(mat->at(r, c));
    }
    return m;
}

namespace {

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> toks;
    std::istringstream is(line);
    std::string t;
    while (is >> t) {
        if (t[0] == '#') break;
        toks.push_back(t);
    }
    return toks;
}

// "[m:n]" -> (m, n)
bool parse_label(const std::string& tok, long& m, long& n) {
    if (tok.size() < 5 || tok.front() != '[' || tok.back() != ']') return false;
    auto colon = tok.find(':');
    if (colon == std::string::npos) return false;
    try {
        size_t used = 0;
        m = std::stol(tok.substr(1, colon - 1), &used);
        n = std::stol(tok.substr(colon + 1, tok.size() - colon - 2), &used);
    } catch (...) {
        return false;
    }
    return true;
}

IntMat parse_matrix(const std::vector<std::string>& toks, size_t& i, int line_no) {
    auto fail = [&](const std::string& why) {
        throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": " + why);
    };
    if (i >= toks.size() || toks[i] != "matrix") fail("expected 'matrix'");
    ++i;
    if (i + 1 >= toks.size()) fail("matrix needs dimensions");
    int r = 0, c = 0;
    try {
        r = std::stoi(toks[i]);
        c = std::stoi(toks[i + 1]);
    } catch (...) {
        fail("bad matrix dimensions");
    }
    i += 2;
    if (r < 1 || c < 1) fail("matrix dimensions must be positive");
    if (i + size_t(r) * c > toks.size()) fail("matrix entries missing");
    IntMat m(r, c);
    for (int rr = 0; rr < r; ++rr)
        for (int cc = 0; cc < c; ++cc) m.at(rr, cc) = Int(toks[i++]);
    return m;
}

}  // namespace

Graph parse_graph(const std::string& text) {
    Graph g;
    std::istringstream is(text);
    std::string line;
    int line_no = 0;
    auto fail = [&](const std::string& why) {
        throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": " + why);
    };
    while (std::getline(is, line)) {
        ++line_no;
        auto toks = tokenize(line);
        if (toks.empty()) continue;
        const std::string& kw = toks[0];
        if (kw == "vertex") {
            if (toks.size() != 3) fail("vertex <name> <rank>");
            if (g.vertex_by_name(toks[1])) fail("duplicate vertex name " + toks[1]);
            int rank = 0;
            try {
                rank = std::stoi(toks[2]);
            } catch (...) {
                fail("bad vertex rank");
            }
            if (rank < 1) fail("vertex rank must be positive");
            g.add_vertex(rank, toks[1]);
        } else if (kw == "edge" || kw == "loop") {
            bool loop = (kw == "loop");
            size_t i = loop ? 3 : 4;  // index of label / matrix data
            if (toks.size() < i + 1)
                fail(loop ? "loop <name> <v> [m:n]" : "edge <name> <u> <w> ...");
            if (g.edge_by_name(toks[1])) fail("duplicate edge name " + toks[1]);
            auto u = g.vertex_by_name(toks[2]);
            auto w = loop ? u : g.vertex_by_name(toks[3]);
            if (!u || !w) fail("unknown vertex in edge " + toks[1]);
            long m = 0, n = 0;
            if (parse_label(toks[i], m, n)) {
                if (i + 1 != toks.size()) fail("trailing tokens after label");
                if (m == 0 || n == 0) fail("zero label on edge " + toks[1]);
                if (g.vertex(*u).rank != 1 || g.vertex(*w).rank != 1)
                    fail("[m:n] labels need rank-1 endpoints");
                g.add_edge_rank1(*u, *w, m, n, toks[1]);
            } else if (toks[i] == "matrix") {
                IntMat mu = parse_matrix(toks, i, line_no);
                IntMat mw = parse_matrix(toks, i, line_no);
                if (i != toks.size()) fail("trailing tokens after matrices");
                try {
                    g.add_edge(*u, *w, mu, mw, toks[1]);
                } catch (const Error& e) {
                    fail(e.what());
                }
            } else {
                fail("expected [m:n] or matrix data");
            }
        } else {
            fail("unknown keyword " + kw);
        }
    }
    try {
        g.validate();
    } catch (const Error& e) {
        throw Error(ErrorKind::ValidationError, e.what());
    }
    return g;
}

namespace {

std::string matrix_text(const IntMat& m) {
    std::ostringstream os;
    os << "matrix " << m.rows() << " " << m.cols();
    for (int r = 0; r < m.rows(); ++r)
        for (int c = 0; c < m.cols(); ++c) os << " " << m.at(r, c).get_str();
    return os.str();
}

bool rank1_edge(const Graph& g, EdgeId e) {
    return g.edge(e).edge_rank == 1 && g.vertex(g.edge(e).origin).rank == 1 &&
           g.vertex(g.edge(e).terminus).rank == 1;
}

std::string edge_line(const Graph& g, EdgeId eid) {
    const EdgeData& ed = g.edge(eid);
    std::ostringstream os;
    if (g.is_loop(eid))
        os << "loop " << ed.name << " " << g.vertex(ed.origin).name;
    else
        os << "edge " << ed.name << " " << g.vertex(ed.origin).name << " "
           << g.vertex(ed.terminus).name;
    if (rank1_edge(g, eid)) {
        os << " [" << ed.inj_origin.at(0, 0).get_str() << ":" << ed.inj_terminus.at(0, 0).get_str()
           << "]";
    } else {
        os << " " << matrix_text(ed.inj_origin) << " " << matrix_text(ed.inj_terminus);
    }
    return os.str();
}

}  // namespace

std::string serialize_graph(const Graph& g) {
    // canonical order for reproducible fixtures
    CanonKey key = canonical_key(g);
    std::vector<VertexId> vs;
    for (auto& [vid, vd] : g.vertices()) vs.push_back(vid);
    std::sort(vs.begin(), vs.end(),
              [&](VertexId a, VertexId b) { return key.vertex_pos.at(a) < key.vertex_pos.at(b); });
    std::vector<EdgeId> es;
    for (auto& [eid, ed] : g.edges()) es.push_back(eid);
    std::sort(es.begin(), es.end(),
              [&](EdgeId a, EdgeId b) { return key.edge_pos.at(a) < key.edge_pos.at(b); });
    std::ostringstream os;
    for (VertexId v : vs) os << "vertex " << g.vertex(v).name << " " << g.vertex(v).rank << "\n";
    for (EdgeId e : es) os << edge_line(g, e) << "\n";
    return os.str();
}

std::string to_dot(const Graph& g) {
    std::ostringstream os;
    os << "graph gog {\n";
    for (auto& [vid, vd] : g.vertices()) {
        os << "  \"" << vd.name << "\" [label=\"" << vd.name;
        if (vd.rank != 1) os << " (Z^" << vd.rank << ")";
        if (vd.composite) os << " *";
        os << "\"];\n";
    }
    for (auto& [eid, ed] : g.edges()) {
        os << "  \"" << g.vertex(ed.origin).name << "\" -- \"" << g.vertex(ed.terminus).name
           << "\" [label=\"";
        if (rank1_edge(g, eid))
            os << ed.inj_origin.at(0, 0).get_str() << ":" << ed.inj_terminus.at(0, 0).get_str();
        else
            os << ed.name;
        os << "\"];\n";
    }
    os << "}\n";
    return os.str();
}

CycleInvariants cycle_invariants(const Graph& g) {
    CycleInvariants inv;
    inv.betti = (int)g.edges().size() - (int)g.vertices().size() + 1;
    if (!g.all_rank1()) {
        inv.has_modulus = false;
        return inv;
    }
    // spanning tree by BFS; parent pointers store the oriented edge used
    std::map<VertexId, OrientedEdge> parent;
    std::set<VertexId> seen;
    std::set<EdgeId> tree;
    VertexId root = g.vertices().begin()->first;
    seen.insert(root);
    std::queue<VertexId> q;
    q.push(root);
    while (!q.empty()) {
        VertexId v = q.front();
        q.pop();
        for (OrientedEdge d : g.ends_at(v)) {
            VertexId t = g.terminal(d);
            if (seen.insert(t).second) {
                parent[t] = d;  // oriented from v to t
                tree.insert(d.edge);
                q.push(t);
            }
        }
    }
    // ratio along an oriented edge: terminal label / initial label
    auto ratio = [&](OrientedEdge d) {
        Rat r(g.inj_terminal(d).at(0, 0), g.inj_initial(d).at(0, 0));
        r.canonicalize();
        return r;
    };
    // product of ratios along the tree path root -> v
    auto path_ratio = [&](VertexId v) {
        Rat r(1);
        while (v != root) {
            OrientedEdge d = parent.at(v);
            r *= ratio(d);
            v = g.initial(d);
        }
        return r;
    };
    for (auto& [eid, ed] : g.edges()) {
        if (tree.count(eid)) continue;
        OrientedEdge d{eid, false};
        // cycle: root -> o(d), cross d, t(d) -> root
        Rat r = path_ratio(g.initial(d)) * ratio(d) / path_ratio(g.terminal(d));
        r.canonicalize();
        if (r < 0) r = -r;
        if (r < 1) r = Rat(1) / r;  // generator of <r>, normalized >= 1
        r.canonicalize();
        inv.modulus_generators.push_back(r);
    }
    inv.has_modulus = true;
    std::sort(inv.modulus_generators.begin(), inv.modulus_generators.end());
    inv.modulus_subgroup = rational_subgroup(inv.modulus_generators);
    return inv;
}

bool same_invariants(const CycleInvariants& a, const CycleInvariants& b) {
    if (a.betti != b.betti) return false;
    if (a.has_modulus != b.has_modulus) return false;
    if (!a.has_modulus) return true;
    return a.modulus_subgroup == b.modulus_subgroup;
}

std::map<EdgeId, EdgeId> transport_edges(const CanonKey& from, const CanonKey& to) {
    std::map<int, EdgeId> by_pos;
    for (auto& [eid, pos] : to.edge_pos) by_pos[pos] = eid;
    std::map<EdgeId, EdgeId> out;
    for (auto& [eid, pos] : from.edge_pos) {
        auto it = by_pos.find(pos);
        if (it == by_pos.end()) throw Error(ErrorKind::Internal, "transport_edges: key mismatch");
        out[eid] = it->second;
    }
    return out;
}

std::map<VertexId, VertexId> transport_vertices(const CanonKey& from, const CanonKey& to) {
    std::map<int, VertexId> by_pos;
    for (auto& [vid, pos] : to.vertex_pos) by_pos[pos] = vid;
    std::map<VertexId, VertexId> out;
    for (auto& [vid, pos] : from.vertex_pos) {
        auto it = by_pos.find(pos);
        if (it == by_pos.end())
            throw Error(ErrorKind::Internal, "transport_vertices: key mismatch");
        out[vid] = it->second;
    }
    return out;
}

}  // namespace jsjforge
