#include "jsjforge/bass_serre.hpp"

#include <algorithm>
#include <queue>
#include <sstream>

namespace jsjforge {
namespace bs {

namespace {

IntVec zero_vec(int n) { return IntVec(n, Int(0)); }

IntVec add(const IntVec& a, const IntVec& b) {
    IntVec out = a;
    for (size_t i = 0; i < out.size(); ++i) out[i] += b[i];
    return out;
}

IntVec neg(const IntVec& a) {
    IntVec out = a;
    for (auto& x : out) x = -x;
    return out;
}

bool is_zero(const IntVec& a) {
    for (auto& x : a)
        if (x != 0) return false;
    return true;
}

std::string syl_key(const Graph& g, const std::vector<Syllable>& syls) {
    std::ostringstream os;
    for (const Syllable& s : syls) {
        os << vec_str(s.coset) << ">" << s.d.edge << (s.d.rev ? "~" : "") << ";";
    }
    return os.str();
}

}  // namespace

Engine::Engine(const Graph& g, VertexId base) : g_(g) {
    g_.validate();
    for (auto& [vid, vd] : g_.vertices())
        if (vd.composite)
            throw Error(ErrorKind::CompositeVertex, "word engine needs free abelian vertex groups");
    base_ = (base >= 0 && g_.has_vertex(base)) ? base : g_.vertices().begin()->first;
    // BFS spanning tree, parent steps oriented toward the base
    std::set<VertexId> seen{base_};
    std::queue<VertexId> q;
    q.push(base_);
    std::map<VertexId, OrientedEdge> parent_step;  // step from v toward base
    while (!q.empty()) {
        VertexId v = q.front();
        q.pop();
        for (OrientedEdge d : g_.ends_at(v)) {
            VertexId t = g_.terminal(d);
            if (seen.insert(t).second) {
                tree_.insert(d.edge);
                parent_step[t] = d.reverse();  // from t back to v
                q.push(t);
            }
        }
    }
    for (auto& [vid, vd] : g_.vertices()) {
        std::vector<OrientedEdge> path;  // from vid to base
        VertexId cur = vid;
        while (cur != base_) {
            OrientedEdge step = parent_step.at(cur);
            path.push_back(step);
            cur = g_.terminal(step);
        }
        tree_parent_[vid] = path;
    }
}

std::vector<OrientedEdge> Engine::tree_path(VertexId from, VertexId to) const {
    // from -> base -> to with the common suffix cancelled
    std::vector<OrientedEdge> up = tree_parent_.at(from);    // from -> base
    std::vector<OrientedEdge> down = tree_parent_.at(to);    // to -> base
    while (!up.empty() && !down.empty() && up.back().edge == down.back().edge) {
        up.pop_back();
        down.pop_back();
    }
    std::vector<OrientedEdge> path = up;
    for (auto it = down.rbegin(); it != down.rend(); ++it) path.push_back(it->reverse());
    return path;
}

void Engine::push_syllable(PathWord& acc, const IntVec& c, OrientedEdge d) const {
    if (acc.end != g_.initial(d)) throw Error(ErrorKind::Internal, "push_syllable: path mismatch");
    IntVec total = add(acc.tail, c);
    Lattice l_in = g_.image_initial(d);
    if (!acc.syls.empty()) {
        const Syllable& top = acc.syls.back();
        if (top.d == d.reverse() && l_in.contains(total)) {
            // pinch t_D z t_D^-1 with z in the image at terminal(D)
            IntVec x;
            if (!solve_exact_vec(g_.inj_initial(d), total, x))
                throw Error(ErrorKind::Internal, "pinch transport failed");
            IntVec transported = IntMat(g_.inj_terminal(d)).mul_vec(x);
            IntVec new_tail = add(top.coset, transported);
            acc.syls.pop_back();
            acc.tail = new_tail;
            acc.end = g_.terminal(d);
            return;
        }
    }
    IntVec rep = l_in.coset_rep(total);
    IntVec rem(total.size());
    for (size_t i = 0; i < total.size(); ++i) rem[i] = total[i] - rep[i];
    IntVec x;
    if (!solve_exact_vec(g_.inj_initial(d), rem, x))
        throw Error(ErrorKind::Internal, "coset transport failed");
    IntVec carried = IntMat(g_.inj_terminal(d)).mul_vec(x);
    acc.syls.push_back({rep, d});
    acc.tail = carried;
    acc.end = g_.terminal(d);
}

void Engine::push_vertex_elt(PathWord& acc, const IntVec& c) const {
    acc.tail = add(acc.tail, c);
}

PathWord Engine::identity() const {
    PathWord w;
    w.base = base_;
    w.end = base_;
    w.tail = zero_vec(g_.vertex(base_).rank);
    return w;
}

PathWord Engine::normal_form(const PathWord& w) const {
    PathWord acc;
    acc.base = w.base;
    acc.end = w.base;
    acc.tail = zero_vec(g_.vertex(w.base).rank);
    for (const Syllable& s : w.syls) push_syllable(acc, s.coset, s.d);
    push_vertex_elt(acc, w.tail);
    if (acc.end != w.end) throw Error(ErrorKind::Internal, "normal_form: endpoint drift");
    return acc;
}

bool Engine::is_identity(const PathWord& w) const {
    PathWord nf = normal_form(w);
    return nf.syls.empty() && is_zero(nf.tail);
}

bool Engine::equal(const PathWord& a, const PathWord& b) const {
    if (a.base != b.base || a.end != b.end) return false;
    PathWord na = normal_form(a), nb = normal_form(b);
    if (na.syls.size() != nb.syls.size() || na.tail != nb.tail) return false;
    for (size_t i = 0; i < na.syls.size(); ++i)
        if (na.syls[i].coset != nb.syls[i].coset || !(na.syls[i].d == nb.syls[i].d)) return false;
    return true;
}

PathWord Engine::mul(const PathWord& a, const PathWord& b) const {
    if (a.end != b.base) throw Error(ErrorKind::Internal, "mul: path endpoints do not match");
    PathWord acc = normal_form(a);
    for (const Syllable& s : b.syls) push_syllable(acc, s.coset, s.d);
    push_vertex_elt(acc, b.tail);
    acc.end = b.end;
    return acc;
}

PathWord Engine::inverse(const PathWord& a) const {
    PathWord out;
    out.base = a.end;
    out.end = a.end;
    out.tail = zero_vec(g_.vertex(a.end).rank);
    IntVec carry = neg(a.tail);
    for (auto it = a.syls.rbegin(); it != a.syls.rend(); ++it) {
        push_syllable(out, carry, it->d.reverse());
        carry = neg(it->coset);
    }
    push_vertex_elt(out, carry);
    out.end = a.base;
    return out;
}

PathWord Engine::conj(const PathWord& h, const PathWord& w) const {
    return mul(mul(inverse(h), w), h);
}

PathWord Engine::power(const PathWord& w, long k) const {
    if (w.base != w.end) throw Error(ErrorKind::Internal, "power: open path");
    PathWord cur = identity();
    cur.base = cur.end = w.base;
    cur.tail = zero_vec(g_.vertex(w.base).rank);
    PathWord step = k >= 0 ? w : inverse(w);
    for (long i = 0; i < (k >= 0 ? k : -k); ++i) cur = mul(cur, step);
    return cur;
}

TreeVertex Engine::base_vertex() const {
    TreeVertex v;
    v.qvertex = base_;
    v.key = "@" + std::to_string(base_) + "|";
    return v;
}

TreeVertex Engine::vertex_of_path(const PathWord& p) const {
    PathWord nf = normal_form(p);
    TreeVertex v;
    v.qvertex = nf.end;
    v.path = nf.syls;
    v.key = "@" + std::to_string(nf.end) + "|" + syl_key(g_, nf.syls);
    return v;
}

PathWord Engine::path_of_vertex(const TreeVertex& v) const {
    PathWord p;
    p.base = base_;
    p.end = base_;
    p.tail = zero_vec(g_.vertex(base_).rank);
    for (const Syllable& s : v.path) push_syllable(p, s.coset, s.d);
    return p;
}

TreeVertex Engine::act(const PathWord& g, const TreeVertex& v) const {
    return vertex_of_path(mul(g, path_of_vertex(v)));
}

std::vector<TreeVertex> Engine::geodesic(const TreeVertex& a, const TreeVertex& b) const {
    PathWord pa = path_of_vertex(a);
    PathWord pb = path_of_vertex(b);
    PathWord d = mul(inverse(pa), pb);  // reduced path a -> b
    std::vector<TreeVertex> out;
    out.push_back(a);
    PathWord prefix = pa;
    for (const Syllable& s : d.syls) {
        PathWord step;
        step.base = prefix.end;
        step.end = prefix.end;
        step.tail = zero_vec(g_.vertex(prefix.end).rank);
        push_syllable(step, s.coset, s.d);
        prefix = mul(prefix, step);
        out.push_back(vertex_of_path(prefix));
    }
    return out;
}

long Engine::distance(const TreeVertex& a, const TreeVertex& b) const {
    PathWord d = mul(inverse(path_of_vertex(a)), path_of_vertex(b));
    return (long)d.syls.size();
}

Engine::Classified Engine::classify(const PathWord& w) const {
    if (w.base != w.end || w.base != base_)
        throw Error(ErrorKind::MalformedWord, "classify needs a closed word at the base vertex");
    Classified c;
    PathWord cur = normal_form(w);
    PathWord conj = identity();
    while (!cur.syls.empty()) {
        size_t k = cur.syls.size();
        const Syllable& first = cur.syls.front();
        const Syllable& last = cur.syls.back();
        IntVec seam = add(cur.tail, first.coset);
        if (k >= 2 && last.d == first.d.reverse() && g_.image_initial(first.d).contains(seam)) {
            PathWord p;  // single-syllable path: conjugate by it
            p.base = cur.base;
            p.end = cur.base;
            p.tail = zero_vec(g_.vertex(cur.base).rank);
            push_syllable(p, first.coset, first.d);
            cur = mul(mul(inverse(p), cur), p);
            conj = mul(conj, p);
            continue;
        }
        break;
    }
    c.conj = conj;
    c.core = cur;
    if (cur.syls.empty()) {
        c.elliptic = true;
        c.length = 0;
        c.point = vertex_of_path(conj);
    } else {
        c.elliptic = false;
        c.length = (long)cur.syls.size();
        c.point = vertex_of_path(conj);
    }
    return c;
}

bool Engine::fixes(const PathWord& g, const TreeVertex& v) const {
    PathWord p = path_of_vertex(v);
    PathWord moved = mul(g, p);
    PathWord rel = mul(inverse(p), moved);
    return rel.syls.empty();
}

bool Engine::on_axis(const PathWord& g, long length, const TreeVertex& v) const {
    TreeVertex moved = act(g, v);
    return distance(v, moved) == length;
}

std::vector<TreeVertex> Engine::axis_segment(const Classified& c, int edges) const {
    if (c.elliptic) throw Error(ErrorKind::Internal, "axis_segment: elliptic element");
    std::vector<TreeVertex> out;
    PathWord prefix = c.conj;
    out.push_back(vertex_of_path(prefix));
    int collected = 0;
    while (collected < edges) {
        for (const Syllable& s : c.core.syls) {
            PathWord step;
            step.base = prefix.end;
            step.end = prefix.end;
            step.tail = zero_vec(g_.vertex(prefix.end).rank);
            push_syllable(step, s.coset, s.d);
            prefix = mul(prefix, step);
            out.push_back(vertex_of_path(prefix));
            if (++collected >= edges) break;
        }
    }
    return out;
}

bool Engine::joint_fixed_edge_at(const PathWord& a, const PathWord& b, const TreeVertex& x) const {
    PathWord p = path_of_vertex(x);
    PathWord ax = mul(mul(inverse(p), a), p);
    PathWord bx = mul(mul(inverse(p), b), p);
    if (!ax.syls.empty() || !bx.syls.empty()) return false;  // not both elliptic at x
    VertexId u = x.qvertex;
    for (OrientedEdge d : g_.ends_at(u)) {
        Lattice l = g_.image_initial(d);
        if (l.contains(ax.tail) && l.contains(bx.tail)) return true;
    }
    return false;
}

namespace {

std::vector<std::string> word_tokens(const std::string& text) {
    std::vector<std::string> toks;
    std::istringstream is(text);
    std::string t;
    while (is >> t) toks.push_back(t);
    return toks;
}

}  // namespace

PathWord Engine::parse_word(const std::string& text) const {
    PathWord acc = identity();
    for (const std::string& tok : word_tokens(text)) {
        if (tok == "1") continue;
        std::string name = tok;
        long exp = 1;
        auto caret = tok.find('^');
        if (caret != std::string::npos) {
            name = tok.substr(0, caret);
            try {
                exp = std::stol(tok.substr(caret + 1));
            } catch (...) {
                throw Error(ErrorKind::MalformedWord, "bad exponent in " + tok);
            }
        }
        // vertex generator "v.i" or bare rank-1 vertex name
        VertexId vgen = -1;
        int gen_index = 0;
        auto dot = name.rfind('.');
        if (dot != std::string::npos) {
            auto v = g_.vertex_by_name(name.substr(0, dot));
            if (v) {
                try {
                    gen_index = std::stoi(name.substr(dot + 1)) - 1;
                } catch (...) {
                    gen_index = -1;
                }
                if (gen_index < 0 || gen_index >= g_.vertex(*v).rank)
                    throw Error(ErrorKind::MalformedWord, "bad generator index in " + tok);
                vgen = *v;
            }
        }
        if (vgen < 0) {
            auto v = g_.vertex_by_name(name);
            if (v && g_.vertex(*v).rank == 1) {
                vgen = *v;
                gen_index = 0;
            }
        }
        if (vgen >= 0) {
            // move to the vertex through the spanning tree, then add the element
            for (OrientedEdge step : tree_path(acc.end, vgen))
                push_syllable(acc, zero_vec(g_.vertex(g_.initial(step)).rank), step);
            IntVec c = zero_vec(g_.vertex(vgen).rank);
            c[gen_index] = exp;
            push_vertex_elt(acc, c);
            continue;
        }
        auto e = g_.edge_by_name(name);
        if (!e) throw Error(ErrorKind::MalformedWord, "unknown generator " + name);
        if (is_tree_edge(*e))
            throw Error(ErrorKind::MalformedWord,
                        "edge " + name + " lies in the spanning tree; its letter is trivial");
        // the positive letter is the backward traversal (terminus -> origin)
        for (long i = 0; i < (exp >= 0 ? exp : -exp); ++i) {
            OrientedEdge d{*e, exp >= 0};
            for (OrientedEdge step : tree_path(acc.end, g_.initial(d)))
                push_syllable(acc, zero_vec(g_.vertex(g_.initial(step)).rank), step);
            push_syllable(acc, zero_vec(g_.vertex(g_.initial(d)).rank), d);
        }
    }
    // close back to the base through the tree
    for (OrientedEdge step : tree_path(acc.end, base_))
        push_syllable(acc, zero_vec(g_.vertex(g_.initial(step)).rank), step);
    return acc;
}

std::string Engine::word_str(const PathWord& w) const {
    PathWord nf = normal_form(w);
    std::ostringstream os;
    bool any = false;
    auto emit_vec = [&](VertexId v, const IntVec& c) {
        for (size_t i = 0; i < c.size(); ++i) {
            if (c[i] == 0) continue;
            if (any) os << " ";
            any = true;
            os << g_.vertex(v).name;
            if (g_.vertex(v).rank > 1) os << "." << (i + 1);
            if (c[i] != 1) os << "^" << c[i].get_str();
        }
    };
    for (const Syllable& s : nf.syls) {
        emit_vec(g_.initial(s.d), s.coset);
        if (!is_tree_edge(s.d.edge)) {
            if (any) os << " ";
            any = true;
            os << g_.edge(s.d.edge).name;
            if (!s.d.rev) os << "^-1";
        }
    }
    emit_vec(nf.end, nf.tail);
    if (!any) os << "1";
    return os.str();
}

HullFragment characteristic_hull(const Engine& eng, const std::vector<PathWord>& s, int radius) {
    if (s.empty()) throw Error(ErrorKind::MalformedWord, "characteristic_hull: empty set");
    HullFragment frag;
    frag.radius = radius;
    frag.saturated = true;
    std::vector<Engine::Classified> cls;
    for (const PathWord& w : s) cls.push_back(eng.classify(eng.normal_form(w)));
    std::set<std::string> seen;
    auto add_vertex = [&](const TreeVertex& v) {
        if (seen.insert(v.key).second) frag.vertices.push_back(v);
    };
    auto add_path = [&](const std::vector<TreeVertex>& path) {
        for (size_t i = 0; i < path.size(); ++i) {
            add_vertex(path[i]);
            if (i) frag.edges.push_back({path[i - 1], path[i]});
        }
    };
    // characteristic pieces
    for (auto& c : cls) {
        if (c.elliptic)
            add_vertex(c.point);
        else
            add_path(eng.axis_segment(c, radius));
    }
    // pairwise bridges between characteristic spaces (trimmed geodesics)
    auto in_char = [&](const Engine::Classified& c, const PathWord& w, const TreeVertex& v) {
        return c.elliptic ? eng.fixes(w, v) : eng.on_axis(w, c.length, v);
    };
    for (size_t i = 0; i < cls.size(); ++i)
        for (size_t j = i + 1; j < cls.size(); ++j) {
            auto geo = eng.geodesic(cls[i].point, cls[j].point);
            if ((int)geo.size() - 1 > radius) {
                frag.saturated = false;
                continue;
            }
            int last_in_i = 0, first_in_j = (int)geo.size() - 1;
            for (int k = 0; k < (int)geo.size(); ++k)
                if (in_char(cls[i], s[i], geo[k])) last_in_i = k;
            for (int k = (int)geo.size() - 1; k >= 0; --k)
                if (in_char(cls[j], s[j], geo[k])) first_in_j = k;
            std::vector<TreeVertex> bridge;
            for (int k = std::min(last_in_i, first_in_j); k <= std::max(last_in_i, first_in_j);
                 ++k)
                bridge.push_back(geo[k]);
            add_path(bridge);
        }
    return frag;
}

}  // namespace bs
}  // namespace jsjforge
