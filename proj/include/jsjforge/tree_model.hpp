#ifndef JSJFORGE_TREE_MODEL_HPP
#define JSJFORGE_TREE_MODEL_HPP

#include <memory>
#include <string>
#include <vector>

#include "jsjforge/bass_serre.hpp"

namespace jsjforge {
namespace bs {

// Minimal view of a simplicial G-tree needed by the incompatibility
// certificate: classify elements, walk geodesics, test membership in
// characteristic spaces. Vertices are opaque canonical keys.
class TreeModel {
public:
    virtual ~TreeModel() = default;

    struct Vertex {
        std::string key;
        bool operator==(const Vertex& o) const { return key == o.key; }
        bool operator<(const Vertex& o) const { return key < o.key; }
    };
    struct Element {
        bool elliptic = true;
        long length = 0;
        Vertex point;  // fixed vertex / point on the axis
        int id = -1;   // model-private handle
    };

    // Throws GeneratorMapMissing when the word cannot be read in this model.
    virtual Element classify_word(const std::string& word) = 0;
    virtual std::vector<Vertex> geodesic(const Vertex& a, const Vertex& b) = 0;
    virtual bool in_char_space(const Element& e, const Vertex& v) = 0;
    // Some edge at x lies in char(a) /\ char(b) (exact where the model can
    // decide; conservative false otherwise).
    virtual bool joint_edge_at(const Element& a, const Element& b, const Vertex& x) = 0;
};

// The Bass-Serre tree of a vGBS graph of groups.
class VgbsModel : public TreeModel {
public:
    explicit VgbsModel(const Graph& g);
    Element classify_word(const std::string& word) override;
    std::vector<Vertex> geodesic(const Vertex& a, const Vertex& b) override;
    bool in_char_space(const Element& e, const Vertex& v) override;
    bool joint_edge_at(const Element& a, const Element& b, const Vertex& x) override;
    const Engine& engine() const { return eng_; }

private:
    Engine eng_;
    std::vector<PathWord> words_;
    std::vector<Engine::Classified> classified_;
    std::map<std::string, TreeVertex> verts_;
    Vertex wrap(const TreeVertex& v);
    const TreeVertex& unwrap(const Vertex& v) const;
};

// The tree obtained from a vGBS tree by collapsing every edge orbit outside
// `kept`: vertices are components of the complement, i.e. crossing patterns
// of kept-edge lifts.
class CollapsedModel : public TreeModel {
public:
    CollapsedModel(const Graph& g, const std::set<EdgeId>& kept);
    Element classify_word(const std::string& word) override;
    std::vector<Vertex> geodesic(const Vertex& a, const Vertex& b) override;
    bool in_char_space(const Element& e, const Vertex& v) override;
    bool joint_edge_at(const Element& a, const Element& b, const Vertex& x) override;

private:
    Engine eng_;
    std::set<EdgeId> kept_;
    std::vector<PathWord> words_;
    std::vector<Engine::Classified> classified_;  // in the uncollapsed tree
    std::map<std::string, TreeVertex> reps_;      // component key -> a tree vertex inside
    // crossing pattern of the path from the base component to v's component
    std::vector<std::string> crossings(const TreeVertex& v) const;
    Vertex component_of(const TreeVertex& v);
    long collapsed_length(const Engine::Classified& c) const;
};

// Whether the two trees verifiably fail to share a common refinement, per the
// two hull-disjointness certificate forms. cert has 3 elements {a,b,c}
// (E_{a,b} /\ E_c empty in one tree and containing an edge in the other) or 4
// elements {a,b,c,d} (E_{a,b} disjoint from E_{c,d} in one tree and E_{a,c}
// disjoint from E_{b,d} in the other). Both orientations of (T, T') are
// tried. Throws UnsaturatedHull when a needed geodesic exceeds `radius`.
bool incompat_certificate(TreeModel& t1, TreeModel& t2, const std::vector<std::string>& cert,
                          int radius);

}  // namespace bs
}  // namespace jsjforge

#endif
