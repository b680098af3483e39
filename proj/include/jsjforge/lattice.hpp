#ifndef JSJFORGE_LATTICE_HPP
#define JSJFORGE_LATTICE_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "jsjforge/intmat.hpp"

namespace jsjforge {

enum class ErrorKind {
    AmbientMismatch,
    ParseError,
    ValidationError,
    EdgeNotFound,
    NotAdjacent,
    StabilizerNotIncluded,
    SelfSlide,
    NotStrictlyAscending,
    GroupOutOfRange,
    TrivialInduction,
    NotPreAscending,
    IsAscending,
    PreconditionsFail,
    LoopCollapse,
    EdgeNotAtVertex,
    NotADeadEnd,
    NotReduced,
    UntrackedEdge,
    MalformedWord,
    RadiusTooSmall,
    UnsaturatedHull,
    GeneratorMapMissing,
    RankUnsupported,
    ExpansionUndefined,
    NotInert,
    NotConnected,
    IncomparablePresentations,
    CompositeVertex,
    Internal,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& msg) : std::runtime_error(msg), kind(kind) {}
    ErrorKind kind;
};

// A sublattice of Z^n in canonical column-style Hermite form. Equal records
// iff equal sublattices.
class Lattice {
public:
    Lattice() : ambient_(0) {}
    // Canonicalizes the column span of `gens` (n rows; columns may be
    // dependent or zero).
    Lattice(int ambient_rank, const IntMat& gens);

    static Lattice full(int ambient_rank);           // Z^n
    static Lattice trivial(int ambient_rank);        // rank 0
    static Lattice scaled(int ambient_rank, const Int& d);  // d * Z^n
    static Lattice rank1(const Int& d);              // dZ in Z

    int ambient_rank() const { return ambient_; }
    int rank() const { return basis_.cols(); }
    const IntMat& basis() const { return basis_; }
    bool is_full() const;
    bool is_trivial() const { return rank() == 0; }

    bool contains(const IntVec& v) const;
    bool contains(const Lattice& other) const;
    // Canonical coset representative of v + L (unique; reduces pivot-row
    // coordinates into [0, pivot)).
    IntVec coset_rep(const IntVec& v) const;
    // Coordinates of v in this basis (v must be a member).
    IntVec coordinates(const IntVec& v) const;

    bool operator==(const Lattice& o) const { return ambient_ == o.ambient_ && basis_ == o.basis_; }
    bool operator!=(const Lattice& o) const { return !(*this == o); }
    bool operator<(const Lattice& o) const;  // arbitrary stable order

    std::string str() const;

private:
    int ambient_;
    IntMat basis_;
};

struct SubIndex {
    bool finite = false;
    Int index;  // valid when finite
};

enum class Relation { Equal, ProperSub, ProperSup, Incomparable };

struct CompareResult {
    Relation rel;
    SubIndex index;  // for ProperSub/ProperSup; finite iff ranks agree
};

Lattice canonicalize(const IntMat& gens, int ambient_rank);
CompareResult compare(const Lattice& a, const Lattice& b);
std::pair<Lattice, Lattice> meet_join(const Lattice& a, const Lattice& b);
Lattice meet(const Lattice& a, const Lattice& b);
Lattice join(const Lattice& a, const Lattice& b);

// All lattices M with low <= M <= Z^n (inclusive), for low of full rank n.
// Throws Error(Internal) when the count would exceed `cap`.
std::vector<Lattice> intermediate_lattices(const Lattice& low, size_t cap);

// Prime factorization by trial division + Pollard rho (inputs are label-sized).
std::vector<std::pair<Int, int>> factorize(Int n);

// Canonical description of the subgroup of Q_{>0} generated by positive
// rationals: the HNF lattice of prime-valuation vectors over a shared prime
// list. Two generator sets generate the same subgroup iff descriptions match.
struct RationalSubgroup {
    std::vector<Int> primes;          // sorted support
    IntMat valuation_lattice;         // column HNF, rows follow `primes`
    bool operator==(const RationalSubgroup& o) const {
        return primes == o.primes && valuation_lattice == o.valuation_lattice;
    }
    std::string str() const;
};
RationalSubgroup rational_subgroup(const std::vector<Rat>& gens);

}  // namespace jsjforge

#endif
