#include "jsjforge/tree_model.hpp"

#include <algorithm>
#include <sstream>

namespace jsjforge {
namespace bs {

VgbsModel::VgbsModel(const Graph& g) : eng_(g) {}

TreeModel::Vertex VgbsModel::wrap(const TreeVertex& v) {
    verts_[v.key] = v;
    return Vertex{v.key};
}

const TreeVertex& VgbsModel::unwrap(const Vertex& v) const {
    auto it = verts_.find(v.key);
    if (it == verts_.end()) throw Error(ErrorKind::Internal, "unknown vertex handle");
    return it->second;
}

TreeModel::Element VgbsModel::classify_word(const std::string& word) {
    PathWord w;
    try {
        w = eng_.parse_word(word);
    } catch (const Error& e) {
        throw Error(ErrorKind::GeneratorMapMissing, std::string("cannot read word: ") + e.what());
    }
    Engine::Classified c = eng_.classify(w);
    Element el;
    el.elliptic = c.elliptic;
    el.length = c.length;
    el.point = wrap(c.point);
    el.id = (int)words_.size();
    words_.push_back(w);
    classified_.push_back(c);
    return el;
}

std::vector<TreeModel::Vertex> VgbsModel::geodesic(const Vertex& a, const Vertex& b) {
    auto path = eng_.geodesic(unwrap(a), unwrap(b));
    std::vector<Vertex> out;
    for (auto& v : path) out.push_back(wrap(v));
    return out;
}

bool VgbsModel::in_char_space(const Element& e, const Vertex& v) {
    const TreeVertex& tv = unwrap(v);
    const PathWord& w = words_.at(e.id);
    if (e.elliptic) return eng_.fixes(w, tv);
    return eng_.on_axis(w, e.length, tv);
}

bool VgbsModel::joint_edge_at(const Element& a, const Element& b, const Vertex& x) {
    if (!a.elliptic || !b.elliptic) return false;
    return eng_.joint_fixed_edge_at(words_.at(a.id), words_.at(b.id), unwrap(x));
}

CollapsedModel::CollapsedModel(const Graph& g, const std::set<EdgeId>& kept)
    : eng_(g), kept_(kept) {}

std::vector<std::string> CollapsedModel::crossings(const TreeVertex& v) const {
    // Kept-edge crossings along the reduced path from the base; each crossing
    // is identified by the canonical vertex handle it starts from plus the
    // oriented edge and its coset.
    std::vector<std::string> out;
    PathWord prefix = eng_.identity();
    for (const Syllable& s : v.path) {
        if (kept_.count(s.d.edge)) {
            TreeVertex at = eng_.vertex_of_path(prefix);
            std::ostringstream os;
            os << at.key << "#" << s.d.edge << (s.d.rev ? "~" : "") << "#" << vec_str(s.coset);
            out.push_back(os.str());
        }
        PathWord one;
        one.base = prefix.end;
        one.end = eng_.graph().terminal(s.d);
        one.tail = IntVec(eng_.graph().vertex(one.end).rank, Int(0));
        one.syls.push_back(s);
        prefix = eng_.mul(prefix, one);
    }
    return out;
}

TreeModel::Vertex CollapsedModel::component_of(const TreeVertex& v) {
    auto cs = crossings(v);
    std::ostringstream os;
    os << "C:";
    for (auto& c : cs) os << c << "|";
    Vertex out{os.str()};
    if (!reps_.count(out.key)) reps_[out.key] = v;
    return out;
}

long CollapsedModel::collapsed_length(const Engine::Classified& c) const {
    long n = 0;
    for (const Syllable& s : c.core.syls)
        if (kept_.count(s.d.edge)) ++n;
    return n;
}

TreeModel::Element CollapsedModel::classify_word(const std::string& word) {
    PathWord w;
    try {
        w = eng_.parse_word(word);
    } catch (const Error& e) {
        throw Error(ErrorKind::GeneratorMapMissing, std::string("cannot read word: ") + e.what());
    }
    Engine::Classified c = eng_.classify(w);
    Element el;
    el.id = (int)words_.size();
    words_.push_back(w);
    classified_.push_back(c);
    long lc = c.elliptic ? 0 : collapsed_length(c);
    if (lc == 0) {
        el.elliptic = true;
        el.length = 0;
        el.point = component_of(c.point);
    } else {
        el.elliptic = false;
        el.length = lc;
        el.point = component_of(c.point);
    }
    return el;
}

std::vector<TreeModel::Vertex> CollapsedModel::geodesic(const Vertex& a, const Vertex& b) {
    const TreeVertex& ra = reps_.at(a.key);
    const TreeVertex& rb = reps_.at(b.key);
    auto path = eng_.geodesic(ra, rb);
    std::vector<Vertex> out;
    for (auto& v : path) {
        Vertex comp = component_of(v);
        if (out.empty() || !(out.back() == comp)) out.push_back(comp);
    }
    return out;
}

bool CollapsedModel::in_char_space(const Element& e, const Vertex& v) {
    const TreeVertex& rep = reps_.at(v.key);
    const PathWord& w = words_.at(e.id);
    const Engine::Classified& c = classified_.at(e.id);
    if (e.elliptic) {
        // the component is fixed iff the element moves a point of it within it
        TreeVertex moved = eng_.act(w, rep);
        return component_of(moved).key == v.key;
    }
    // v on the collapsed axis iff the collapsed distance to its translate is
    // the collapsed translation length
    TreeVertex moved = eng_.act(w, rep);
    auto path = eng_.geodesic(rep, moved);
    long crossings_count = 0;
    if (!path.empty()) {
        PathWord pa = eng_.path_of_vertex(rep);
        PathWord pb = eng_.path_of_vertex(moved);
        PathWord diff = eng_.mul(eng_.inverse(pa), pb);
        for (const Syllable& s : diff.syls)
            if (kept_.count(s.d.edge)) ++crossings_count;
    }
    (void)c;
    return crossings_count == e.length;
}

bool CollapsedModel::joint_edge_at(const Element&, const Element&, const Vertex&) {
    return false;  // conservative; the four-element certificate does not need it
}

namespace {

struct Hull {
    // pieces: the two characteristic spaces plus the connecting bridge
    std::vector<TreeModel::Element> chars;
    std::vector<std::vector<TreeModel::Vertex>> bridges;
};

Hull build_hull(TreeModel& t, const TreeModel::Element& x, const TreeModel::Element& y,
                int radius) {
    Hull h;
    h.chars = {x, y};
    auto geo = t.geodesic(x.point, y.point);
    if ((int)geo.size() - 1 > radius)
        throw Error(ErrorKind::UnsaturatedHull, "hull bridge exceeds the radius; raise it");
    int last_in_x = 0, first_in_y = (int)geo.size() - 1;
    for (int k = 0; k < (int)geo.size(); ++k)
        if (t.in_char_space(x, geo[k])) last_in_x = k;
    for (int k = (int)geo.size() - 1; k >= 0; --k)
        if (t.in_char_space(y, geo[k])) first_in_y = k;
    std::vector<TreeModel::Vertex> bridge;
    for (int k = std::min(last_in_x, first_in_y); k <= std::max(last_in_x, first_in_y); ++k)
        bridge.push_back(geo[k]);
    h.bridges.push_back(bridge);
    return h;
}

Hull singleton_hull(const TreeModel::Element& x) {
    Hull h;
    h.chars = {x};
    return h;
}

// Do the convex pieces of two hulls meet anywhere?
bool hulls_meet(TreeModel& t, const Hull& a, const Hull& b, int radius) {
    // char vs char: trim the geodesic between representative points
    for (auto& ca : a.chars)
        for (auto& cb : b.chars) {
            auto geo = t.geodesic(ca.point, cb.point);
            if ((int)geo.size() - 1 > radius)
                throw Error(ErrorKind::UnsaturatedHull, "geodesic exceeds the radius; raise it");
            int last_in_a = 0, first_in_b = (int)geo.size() - 1;
            for (int k = 0; k < (int)geo.size(); ++k)
                if (t.in_char_space(ca, geo[k])) last_in_a = k;
            for (int k = (int)geo.size() - 1; k >= 0; --k)
                if (t.in_char_space(cb, geo[k])) first_in_b = k;
            if (last_in_a >= first_in_b) return true;
        }
    // char vs bridge and bridge vs bridge: explicit vertices
    auto char_hits_path = [&](const TreeModel::Element& c,
                              const std::vector<TreeModel::Vertex>& path) {
        for (auto& v : path)
            if (t.in_char_space(c, v)) return true;
        return false;
    };
    for (auto& ca : a.chars)
        for (auto& pb : b.bridges)
            if (char_hits_path(ca, pb)) return true;
    for (auto& cb : b.chars)
        for (auto& pa : a.bridges)
            if (char_hits_path(cb, pa)) return true;
    for (auto& pa : a.bridges)
        for (auto& pb : b.bridges) {
            std::set<std::string> keys;
            for (auto& v : pa) keys.insert(v.key);
            for (auto& v : pb)
                if (keys.count(v.key)) return true;
        }
    return false;
}

// Does E_{a,b} /\ E_c contain an edge? (3-element form, second condition)
bool intersection_has_edge(TreeModel& t, const Hull& ab, const TreeModel::Element& c,
                           int radius) {
    // an edge of the bridge inside char(c): endpoints pairwise in char(c)
    for (auto& bridge : ab.bridges)
        for (size_t i = 0; i + 1 < bridge.size(); ++i)
            if (t.in_char_space(c, bridge[i]) && t.in_char_space(c, bridge[i + 1])) return true;
    // an edge inside char(x) /\ char(c) at a meeting vertex
    for (auto& x : ab.chars) {
        auto geo = t.geodesic(x.point, c.point);
        if ((int)geo.size() - 1 > radius)
            throw Error(ErrorKind::UnsaturatedHull, "geodesic exceeds the radius; raise it");
        for (size_t i = 0; i < geo.size(); ++i) {
            if (!t.in_char_space(x, geo[i]) || !t.in_char_space(c, geo[i])) continue;
            // adjacent meeting vertices give an edge directly
            if (i + 1 < geo.size() && t.in_char_space(x, geo[i + 1]) &&
                t.in_char_space(c, geo[i + 1]))
                return true;
            if (t.joint_edge_at(x, c, geo[i])) return true;
        }
    }
    return false;
}

bool check_oriented(TreeModel& t_empty, TreeModel& t_other, const std::vector<std::string>& cert,
                    int radius) {
    if (cert.size() == 3) {
        auto a1 = t_empty.classify_word(cert[0]);
        auto b1 = t_empty.classify_word(cert[1]);
        auto c1 = t_empty.classify_word(cert[2]);
        Hull ab1 = build_hull(t_empty, a1, b1, radius);
        Hull c_hull = singleton_hull(c1);
        if (hulls_meet(t_empty, ab1, c_hull, radius)) return false;
        auto a2 = t_other.classify_word(cert[0]);
        auto b2 = t_other.classify_word(cert[1]);
        auto c2 = t_other.classify_word(cert[2]);
        Hull ab2 = build_hull(t_other, a2, b2, radius);
        return intersection_has_edge(t_other, ab2, c2, radius);
    }
    if (cert.size() == 4) {
        auto a1 = t_empty.classify_word(cert[0]);
        auto b1 = t_empty.classify_word(cert[1]);
        auto c1 = t_empty.classify_word(cert[2]);
        auto d1 = t_empty.classify_word(cert[3]);
        Hull ab = build_hull(t_empty, a1, b1, radius);
        Hull cd = build_hull(t_empty, c1, d1, radius);
        if (hulls_meet(t_empty, ab, cd, radius)) return false;
        auto a2 = t_other.classify_word(cert[0]);
        auto b2 = t_other.classify_word(cert[1]);
        auto c2 = t_other.classify_word(cert[2]);
        auto d2 = t_other.classify_word(cert[3]);
        Hull ac = build_hull(t_other, a2, c2, radius);
        Hull bd = build_hull(t_other, b2, d2, radius);
        return !hulls_meet(t_other, ac, bd, radius);
    }
    throw Error(ErrorKind::MalformedWord, "certificate needs 3 or 4 elements");
}

}  // namespace

bool incompat_certificate(TreeModel& t1, TreeModel& t2, const std::vector<std::string>& cert,
                          int radius) {
    if (check_oriented(t1, t2, cert, radius)) return true;
    return check_oriented(t2, t1, cert, radius);
}

}  // namespace bs
}  // namespace jsjforge
