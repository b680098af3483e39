#ifndef JSJFORGE_AMALGAM_BS22_HPP
#define JSJFORGE_AMALGAM_BS22_HPP

#include "jsjforge/tree_model.hpp"

namespace jsjforge {
namespace bs {

// The tree of the splitting BS(2,2) = <a,s | s a^2 s^-1 = a^2> *_{a^2=b, s=t^2}
// <b,t | bt=tb> with vertex groups A = <a, t^2> and B = <a^2, t> and edge
// group E = <a^2, t^2>. Vertex groups are handled through membership oracles
// over the ambient HNN normal-form engine; words are read in the generators
// a, t of the HNN presentation.
class AmalgamBS22Model : public TreeModel {
public:
    AmalgamBS22Model();

    Element classify_word(const std::string& word) override;
    std::vector<Vertex> geodesic(const Vertex& a, const Vertex& b) override;
    bool in_char_space(const Element& e, const Vertex& v) override;
    bool joint_edge_at(const Element& a, const Element& b, const Vertex& x) override;

    // membership oracles (exposed for tests)
    bool in_A(const PathWord& g) const;
    bool in_B(const PathWord& g) const;
    bool in_E(const PathWord& g) const;
    // canonical coset representatives
    PathWord rep_A(const PathWord& g) const;  // g in A; canonical in gE
    PathWord rep_B(const PathWord& g) const;  // g in B; 1 or t

    const Engine& engine() const { return eng_; }

private:
    Graph hnn_;
    Engine eng_;

    struct Block {
        PathWord x;   // canonical nontrivial coset rep
        bool a_side;  // x in A (else in B)
    };
    struct Form {
        std::vector<Block> blocks;  // alternating sides
        PathWord tail;              // element of E
    };
    Form to_form(const PathWord& g) const;
    PathWord form_element(const Form& f) const;

    // A coset gA or gB as the alternating sequence with the trailing
    // same-side block absorbed.
    struct Coset {
        std::vector<Block> blocks;
        bool a_type;
    };
    Coset coset_of(const PathWord& g, bool a_type) const;
    std::string coset_key(const Coset& c) const;
    PathWord coset_element(const Coset& c) const;
    Vertex wrap(const Coset& c);
    std::map<std::string, Coset> verts_;
    std::vector<PathWord> words_;
    std::vector<std::pair<bool, long>> word_info_;  // elliptic?, length

    std::vector<Coset> path_from_base(const Coset& target) const;
};

}  // namespace bs
}  // namespace jsjforge

#endif
