#include <algorithm>
#include <functional>
#include <map>
#include <sstream>

#include "jsjforge/gog.hpp"

namespace jsjforge {

namespace {

std::string smith_str(const IntMat& m) {
    std::ostringstream os;
    for (const Int& d : smith_divisors(m)) os << d.get_str() << ".";
    return os.str();
}

std::string mat_bytes(const IntMat& m) {
    std::ostringstream os;
    os << m.rows() << "x" << m.cols() << ":";
    for (int r = 0; r < m.rows(); ++r)
        for (int c = 0; c < m.cols(); ++c) os << m.at(r, c).get_str() << ",";
    return os.str();
}

// Frame-invariant signature of an edge end (independent of vertex coordinates
// and of the edge-group frame).
std::string end_signature(const Graph& g, OrientedEdge d) {
    std::ostringstream os;
    os << g.edge(d.edge).edge_rank << ";" << smith_str(g.inj_initial(d)) << ";"
       << (g.is_loop(d.edge) ? "L" : "-") << ";" << g.vertex(g.terminal(d)).rank << ";"
       << smith_str(g.inj_terminal(d));
    return os.str();
}

// Pin a canonical coordinate frame on a rank >= 2 vertex by row-HNF of the
// stacked incident images, enumerating tie-group orders (bounded). Returns
// false when the frame could not be pinned exactly.
bool pin_frame(Graph& g, VertexId v) {
    int n = g.vertex(v).rank;
    auto ends = g.ends_at(v);
    if (ends.empty()) return false;
    std::stable_sort(ends.begin(), ends.end(), [&](OrientedEdge a, OrientedEdge b) {
        return end_signature(g, a) < end_signature(g, b);
    });
    std::vector<std::pair<size_t, size_t>> groups;  // [first, last) runs of equal signature
    size_t i = 0;
    while (i < ends.size()) {
        size_t j = i + 1;
        while (j < ends.size() && end_signature(g, ends[j]) == end_signature(g, ends[i])) ++j;
        groups.push_back({i, j});
        i = j;
    }
    size_t perms = 1;
    for (auto& [a, b] : groups) {
        for (size_t k = 2; k <= b - a; ++k) perms *= k;
        if (perms > 120) break;
    }
    bool exact = perms <= 120;
    std::string best_bytes;
    IntMat best_u;
    bool found = false;
    auto consider = [&](const std::vector<OrientedEdge>& order) {
        IntMat d(n, 0);
        for (OrientedEdge e : order) d = d.hstack(g.inj_initial(e));
        IntMat u;
        IntMat h = hnf_rows_transform(d, u);
        if (h.rank() < n) exact = false;  // leftover frame stabilizer
        std::ostringstream os;
        os << mat_bytes(h);
        for (OrientedEdge e : order) os << "|" << mat_bytes(u.mul(g.inj_initial(e)));
        std::string bytes = os.str();
        if (!found || bytes < best_bytes) {
            found = true;
            best_bytes = bytes;
            best_u = u;
        }
    };
    if (exact) {
        std::function<void(size_t, std::vector<OrientedEdge>&)> rec =
            [&](size_t gi, std::vector<OrientedEdge>& order) {
                if (gi == groups.size()) {
                    consider(order);
                    return;
                }
                auto [a, b] = groups[gi];
                std::vector<OrientedEdge> grp(ends.begin() + a, ends.begin() + b);
                std::sort(grp.begin(), grp.end());
                do {
                    for (size_t k = a; k < b; ++k) order[k] = grp[k - a];
                    rec(gi + 1, order);
                } while (std::next_permutation(grp.begin(), grp.end()));
            };
        std::vector<OrientedEdge> order = ends;
        rec(0, order);
    } else {
        consider(ends);
    }
    for (auto& [eid, ed] : g.edges()) {
        if (ed.origin == v) g.edge_mut(eid).inj_origin = best_u.mul(g.edge(eid).inj_origin);
        if (g.edge(eid).terminus == v)
            g.edge_mut(eid).inj_terminus = best_u.mul(g.edge(eid).inj_terminus);
    }
    return exact;
}

struct EdgeRecord {
    int a = 0, b = 0;  // canonical endpoint positions, initial end first
    std::string inj_a, inj_b;
    EdgeId id = -1;
    std::string bytes() const {
        std::ostringstream os;
        os << a << "-" << b << ":" << inj_a << ":" << inj_b;
        return os.str();
    }
};

EdgeRecord edge_record(const Graph& g, EdgeId eid, const std::map<VertexId, int>& pos,
                       const std::map<VertexId, int>& sign) {
    const EdgeData& ed = g.edge(eid);
    auto signed_inj = [&](VertexId v, const IntMat& m) {
        auto it = sign.find(v);
        if (it == sign.end() || it->second == 1) return m;
        return m.negated();
    };
    IntMat mo = signed_inj(ed.origin, ed.inj_origin);
    IntMat mt = signed_inj(ed.terminus, ed.inj_terminus);
    auto normalized = [&](int a, int b, const IntMat& x, const IntMat& y) {
        IntMat u;
        hnf_cols_transform(x.vstack(y), u);
        EdgeRecord r;
        r.a = a;
        r.b = b;
        r.inj_a = mat_bytes(x.mul(u));
        r.inj_b = mat_bytes(y.mul(u));
        r.id = eid;
        return r;
    };
    EdgeRecord r1 = normalized(pos.at(ed.origin), pos.at(ed.terminus), mo, mt);
    EdgeRecord r2 = normalized(pos.at(ed.terminus), pos.at(ed.origin), mt, mo);
    return r1.bytes() <= r2.bytes() ? r1 : r2;
}

}  // namespace

CanonKey canonical_key(const Graph& g) {
    Graph work = g;
    bool exact = true;
    std::vector<VertexId> rank1;
    for (auto& [vid, vd] : work.vertices()) {
        if (vd.rank == 1)
            rank1.push_back(vid);
        else if (!pin_frame(work, vid))
            exact = false;
    }

    // WL colour refinement on invariant signatures
    std::map<VertexId, std::string> color;
    for (auto& [vid, vd] : work.vertices()) {
        std::vector<std::string> sigs;
        for (OrientedEdge d : work.ends_at(vid)) sigs.push_back(end_signature(work, d));
        std::sort(sigs.begin(), sigs.end());
        std::ostringstream os;
        os << vd.rank << (vd.composite ? "c" : "-");
        for (auto& s : sigs) os << "{" << s << "}";
        color[vid] = os.str();
    }
    for (size_t round = 0; round < work.vertices().size(); ++round) {
        std::map<VertexId, std::string> next;
        for (auto& [vid, vd] : work.vertices()) {
            std::vector<std::string> sigs;
            for (OrientedEdge d : work.ends_at(vid))
                sigs.push_back(end_signature(work, d) + "@" + color[work.terminal(d)]);
            std::sort(sigs.begin(), sigs.end());
            std::ostringstream os;
            os << color[vid];
            for (auto& s : sigs) os << "<" << s << ">";
            next[vid] = os.str();
        }
        if (next == color) break;
        color = next;
    }

    std::map<std::string, std::vector<VertexId>> classes;
    for (auto& [vid, c] : color) classes[c].push_back(vid);
    std::vector<std::vector<VertexId>> class_list;
    for (auto& [c, vs] : classes) {
        auto sorted = vs;
        std::sort(sorted.begin(), sorted.end());
        class_list.push_back(sorted);
    }

    size_t combos = 1;
    for (auto& cl : class_list) {
        for (size_t k = 2; k <= cl.size(); ++k) combos *= k;
        if (combos > 100000) break;
    }
    size_t sign_combos = size_t(1) << std::min<size_t>(rank1.size(), 20);
    bool degrade = combos > 5000 || combos * sign_combos > 300000;
    if (degrade) exact = false;

    std::string best;
    std::map<VertexId, int> best_pos;
    std::map<EdgeId, int> best_epos;
    bool found = false;

    auto evaluate = [&](const std::vector<VertexId>& order, const std::map<VertexId, int>& sign) {
        std::map<VertexId, int> pos;
        for (int i = 0; i < (int)order.size(); ++i) pos[order[i]] = i;
        std::ostringstream os;
        os << "V:";
        for (VertexId v : order)
            os << work.vertex(v).rank << (work.vertex(v).composite ? "c" : "-") << "|";
        std::vector<EdgeRecord> recs;
        for (auto& [eid, ed] : work.edges()) recs.push_back(edge_record(work, eid, pos, sign));
        std::sort(recs.begin(), recs.end(), [](const EdgeRecord& x, const EdgeRecord& y) {
            auto bx = x.bytes(), by = y.bytes();
            return bx != by ? bx < by : x.id < y.id;
        });
        os << "E:";
        for (auto& r : recs) os << r.bytes() << "|";
        std::string bytes = os.str();
        if (!found || bytes < best) {
            found = true;
            best = bytes;
            best_pos = pos;
            best_epos.clear();
            for (int i = 0; i < (int)recs.size(); ++i) best_epos[recs[i].id] = i;
        }
    };

    std::map<VertexId, int> sign;
    for (VertexId v : rank1) sign[v] = 1;

    if (degrade) {
        std::vector<VertexId> order;
        for (auto& cl : class_list)
            for (VertexId v : cl) order.push_back(v);
        evaluate(order, sign);
    } else {
        std::function<void(size_t, std::vector<VertexId>&)> rec_order =
            [&](size_t ci, std::vector<VertexId>& order) {
                if (ci == class_list.size()) {
                    std::function<void(size_t)> rec_sign = [&](size_t si) {
                        if (si == rank1.size()) {
                            evaluate(order, sign);
                            return;
                        }
                        sign[rank1[si]] = 1;
                        rec_sign(si + 1);
                        sign[rank1[si]] = -1;
                        rec_sign(si + 1);
                        sign[rank1[si]] = 1;
                    };
                    rec_sign(0);
                    return;
                }
                auto cl = class_list[ci];
                std::sort(cl.begin(), cl.end());
                do {
                    size_t base = order.size();
                    for (VertexId v : cl) order.push_back(v);
                    rec_order(ci + 1, order);
                    order.resize(base);
                } while (std::next_permutation(cl.begin(), cl.end()));
            };
        std::vector<VertexId> order;
        rec_order(0, order);
    }

    CanonKey key;
    key.bytes = best + (exact ? "!" : "~");
    key.exact = exact;
    key.vertex_pos = best_pos;
    key.edge_pos = best_epos;
    return key;
}

}  // namespace jsjforge
