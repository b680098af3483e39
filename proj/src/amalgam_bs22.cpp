#include "jsjforge/amalgam_bs22.hpp"

#include <sstream>

namespace jsjforge {
namespace bs {

namespace {

// t-runs of a normal form in the quotient Z/2 * Z (a -> generator of Z/2,
// a^2 -> 1): maximal blocks of same-direction crossings separated by odd
// cosets. Britton reduction guarantees direction flips only across odd
// cosets, so runs are well defined.
std::vector<long> t_runs(const PathWord& nf) {
    std::vector<long> runs;
    long cur = 0;
    for (const Syllable& s : nf.syls) {
        bool odd = (s.coset.at(0) % 2) != 0;
        if (odd && cur != 0) {
            runs.push_back(cur);
            cur = 0;
        }
        cur += s.d.rev ? 1 : -1;
    }
    if (cur != 0) runs.push_back(cur);
    return runs;
}

}  // namespace

AmalgamBS22Model::AmalgamBS22Model()
    : hnn_(parse_graph("vertex a 1\nloop t a [2:2]\n")), eng_(hnn_) {}

bool AmalgamBS22Model::in_B(const PathWord& g) const {
    PathWord nf = eng_.normal_form(g);
    for (const Syllable& s : nf.syls)
        if (s.coset.at(0) % 2 != 0) return false;
    return nf.tail.at(0) % 2 == 0;
}

bool AmalgamBS22Model::in_A(const PathWord& g) const {
    PathWord nf = eng_.normal_form(g);
    for (long r : t_runs(nf))
        if (r % 2 != 0) return false;
    return true;
}

bool AmalgamBS22Model::in_E(const PathWord& g) const { return in_A(g) && in_B(g); }

PathWord AmalgamBS22Model::rep_B(const PathWord& g) const {
    if (!in_B(g)) throw Error(ErrorKind::Internal, "rep_B: element not in B");
    long sigma = 0;
    PathWord nf = eng_.normal_form(g);
    for (const Syllable& s : nf.syls) sigma += s.d.rev ? 1 : -1;
    return (sigma % 2 == 0) ? eng_.identity() : eng_.parse_word("t");
}

PathWord AmalgamBS22Model::rep_A(const PathWord& g) const {
    if (!in_A(g)) throw Error(ErrorKind::Internal, "rep_A: element not in A");
    // A/E is the coset space of <s> in Z/2 * <s> (s = t^2, a^2 central and
    // inside E): the canonical representative is the image word with its
    // trailing s-run stripped, lifted back letter by letter.
    PathWord nf = eng_.normal_form(g);
    std::vector<std::pair<long, bool>> items;  // (signed t-run, followed by a-letter?)
    long run = 0;
    for (const Syllable& s : nf.syls) {
        bool odd = (s.coset.at(0) % 2) != 0;
        if (odd) {
            items.push_back({run, true});
            run = 0;
        }
        run += s.d.rev ? 1 : -1;
    }
    bool tail_odd = (nf.tail.at(0) % 2) != 0;
    items.push_back({run, tail_odd});  // trailing run; the final a depends on the tail
    // strip the trailing t-run (it lies in E)
    items.back().first = items.back().second ? items.back().first : 0;
    std::ostringstream os;
    for (size_t i = 0; i < items.size(); ++i) {
        auto [r, a_after] = items[i];
        bool last = (i + 1 == items.size());
        if (!(last && !a_after) && r != 0) os << "t^" << r << " ";
        if (a_after) os << "a ";
    }
    return eng_.normal_form(eng_.parse_word(os.str()));
}

AmalgamBS22Model::Form AmalgamBS22Model::to_form(const PathWord& g) const {
    Form f;
    f.tail = eng_.identity();
    // process the normal form as (generator, exponent) units
    PathWord nf = eng_.normal_form(g);
    std::vector<PathWord> units;
    std::ostringstream unit;
    auto push_unit = [&](const std::string& s) {
        if (!s.empty()) units.push_back(eng_.parse_word(s));
    };
    {
        std::istringstream is(eng_.word_str(nf));
        std::string tok;
        while (is >> tok)
            if (tok != "1") push_unit(tok);
    }
    for (const PathWord& u : units) {
        PathWord z = eng_.mul(f.tail, u);
        bool z_in_a = in_A(z);
        bool z_in_b = in_B(z);
        if (z_in_a && z_in_b) {  // still in E
            f.tail = z;
            continue;
        }
        bool side_a = z_in_a;
        if (!f.blocks.empty() && f.blocks.back().a_side == side_a) {
            PathWord y = eng_.mul(f.blocks.back().x, z);
            if (in_E(y)) {
                f.blocks.pop_back();
                f.tail = y;
                continue;
            }
            PathWord rep = side_a ? rep_A(y) : rep_B(y);
            PathWord e = eng_.mul(eng_.inverse(rep), y);
            if (!in_E(e)) throw Error(ErrorKind::Internal, "amalgam form: bad coset split");
            f.blocks.back().x = rep;
            f.tail = e;
        } else {
            PathWord rep = side_a ? rep_A(z) : rep_B(z);
            PathWord e = eng_.mul(eng_.inverse(rep), z);
            if (!in_E(e)) throw Error(ErrorKind::Internal, "amalgam form: bad coset split");
            f.blocks.push_back({rep, side_a});
            f.tail = e;
        }
    }
    return f;
}

PathWord AmalgamBS22Model::form_element(const Form& f) const {
    PathWord g = eng_.identity();
    for (const Block& b : f.blocks) g = eng_.mul(g, b.x);
    return eng_.mul(g, f.tail);
}

AmalgamBS22Model::Coset AmalgamBS22Model::coset_of(const PathWord& g, bool a_type) const {
    Form f = to_form(g);
    Coset c;
    c.a_type = a_type;
    c.blocks = f.blocks;
    // absorb a trailing block of the coset's own side (and the E tail)
    while (!c.blocks.empty() && c.blocks.back().a_side == a_type) c.blocks.pop_back();
    return c;
}

std::string AmalgamBS22Model::coset_key(const Coset& c) const {
    std::ostringstream os;
    os << (c.a_type ? "A" : "B") << "|";
    for (const Block& b : c.blocks)
        os << (b.a_side ? "a:" : "b:") << eng_.word_str(b.x) << ";";
    return os.str();
}

PathWord AmalgamBS22Model::coset_element(const Coset& c) const {
    PathWord g = eng_.identity();
    for (const Block& b : c.blocks) g = eng_.mul(g, b.x);
    return g;
}

TreeModel::Vertex AmalgamBS22Model::wrap(const Coset& c) {
    Vertex v{coset_key(c)};
    verts_.emplace(v.key, c);
    return v;
}

std::vector<AmalgamBS22Model::Coset> AmalgamBS22Model::path_from_base(const Coset& target) const {
    // vertices along the geodesic from the A-base (or B-base) ... always from
    // the A-base here; callers translate. Walk prefix products, inserting the
    // crossing vertex when the next block starts on the far side.
    std::vector<Coset> out;
    Coset base;
    base.a_type = true;
    out.push_back(base);
    PathWord prefix = eng_.identity();
    bool at_a = true;
    for (const Block& b : target.blocks) {
        if (b.a_side) {
            // move within the A side: cross to the B vertex through b.x
            if (!at_a) {
                // crossing from B into an A block: pass the A vertex first
                Coset mid = coset_of(prefix, true);
                out.push_back(mid);
                at_a = true;
            }
            prefix = eng_.mul(prefix, b.x);
            Coset nb = coset_of(prefix, false);
            out.push_back(nb);
            at_a = false;
        } else {
            if (at_a) {
                Coset mid = coset_of(prefix, false);
                out.push_back(mid);
                at_a = false;
            }
            prefix = eng_.mul(prefix, b.x);
            Coset na = coset_of(prefix, true);
            out.push_back(na);
            at_a = true;
        }
    }
    if ((target.a_type && !at_a) || (!target.a_type && at_a)) {
        out.push_back(coset_of(prefix, target.a_type));
    }
    return out;
}

TreeModel::Element AmalgamBS22Model::classify_word(const std::string& word) {
    PathWord w;
    try {
        w = eng_.parse_word(word);
    } catch (const Error& e) {
        throw Error(ErrorKind::GeneratorMapMissing, std::string("cannot read word: ") + e.what());
    }
    Element el;
    el.id = (int)words_.size();
    words_.push_back(w);
    Form f = to_form(w);
    PathWord conj = eng_.identity();
    // cyclic reduction on the block form
    while (f.blocks.size() >= 2 && f.blocks.front().a_side == f.blocks.back().a_side) {
        PathWord x1 = f.blocks.front().x;
        PathWord g = form_element(f);
        PathWord reduced = eng_.mul(eng_.mul(eng_.inverse(x1), g), x1);
        Form nf = to_form(reduced);
        if (nf.blocks.size() >= f.blocks.size()) break;
        f = nf;
        conj = eng_.mul(conj, x1);
    }
    if (f.blocks.size() <= 1) {
        el.elliptic = true;
        el.length = 0;
        bool a_type = f.blocks.empty() ? true : f.blocks.front().a_side;
        if (f.blocks.empty()) {
            // element of E: fixes both base vertices; report the A base
            a_type = true;
        }
        el.point = wrap(coset_of(conj, a_type));
    } else {
        el.elliptic = false;
        el.length = (long)f.blocks.size();
        el.point = wrap(coset_of(conj, true));
    }
    word_info_.push_back({el.elliptic, el.length});
    return el;
}

std::vector<TreeModel::Vertex> AmalgamBS22Model::geodesic(const Vertex& a, const Vertex& b) {
    const Coset& ca = verts_.at(a.key);
    const Coset& cb = verts_.at(b.key);
    PathWord ga = coset_element(ca);
    PathWord delta = eng_.mul(eng_.inverse(ga), coset_element(cb));
    Coset target = coset_of(delta, cb.a_type);
    std::vector<Vertex> out;
    for (const Coset& c : path_from_base(target)) {
        // translate back by ga
        Coset shifted = coset_of(eng_.mul(ga, coset_element(c)), c.a_type);
        out.push_back(wrap(shifted));
    }
    // collapse accidental duplicates
    std::vector<Vertex> dedup;
    for (auto& v : out)
        if (dedup.empty() || !(dedup.back() == v)) dedup.push_back(v);
    return dedup;
}

bool AmalgamBS22Model::in_char_space(const Element& e, const Vertex& v) {
    const Coset& c = verts_.at(v.key);
    const PathWord& w = words_.at(e.id);
    PathWord g = coset_element(c);
    PathWord conj = eng_.mul(eng_.mul(eng_.inverse(g), w), g);
    if (e.elliptic) return c.a_type ? in_A(conj) : in_B(conj);
    // on the axis iff d(v, w v) equals the translation length
    Coset moved = coset_of(eng_.mul(w, g), c.a_type);
    Vertex mv = wrap(moved);
    auto path = geodesic(v, mv);
    return (long)path.size() - 1 == e.length;
}

bool AmalgamBS22Model::joint_edge_at(const Element& a, const Element& b, const Vertex& x) {
    if (!a.elliptic || !b.elliptic) return false;
    const Coset& c = verts_.at(x.key);
    PathWord g = coset_element(c);
    PathWord ax = eng_.mul(eng_.mul(eng_.inverse(g), words_.at(a.id)), g);
    PathWord bx = eng_.mul(eng_.mul(eng_.inverse(g), words_.at(b.id)), g);
    std::vector<std::string> reps =
        c.a_type ? std::vector<std::string>{"1", "a", "t^2", "a t^2", "t^-2"}
                 : std::vector<std::string>{"1", "t"};
    for (auto& r : reps) {
        PathWord xr = eng_.parse_word(r);
        PathWord ca = eng_.mul(eng_.mul(eng_.inverse(xr), ax), xr);
        PathWord cb = eng_.mul(eng_.mul(eng_.inverse(xr), bx), xr);
        if (in_E(ca) && in_E(cb)) return true;
    }
    return false;
}

}  // namespace bs
}  // namespace jsjforge
