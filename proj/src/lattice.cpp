#include "jsjforge/lattice.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>

namespace jsjforge {

Lattice::Lattice(int ambient_rank, const IntMat& gens) : ambient_(ambient_rank) {
    if (gens.empty()) {
        basis_ = IntMat(ambient_rank, 0);
        return;
    }
    if (gens.rows() != ambient_rank)
        throw Error(ErrorKind::AmbientMismatch, "generator rows != ambient rank");
    basis_ = hnf_cols(gens);
}

Lattice Lattice::full(int n) { return Lattice(n, IntMat::identity(n)); }

Lattice Lattice::trivial(int n) { return Lattice(n, IntMat(n, 0)); }

Lattice Lattice::scaled(int n, const Int& d) {
    IntMat m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = d;
    return Lattice(n, m);
}

Lattice Lattice::rank1(const Int& d) {
    IntMat m(1, 1);
    m.at(0, 0) = d;
    return Lattice(1, m);
}

bool Lattice::is_full() const {
    if (rank() != ambient_) return false;
    Int prod = 1;
    for (int i = 0; i < ambient_; ++i) prod *= basis_.at(i, i);
    return prod == 1;
}

bool Lattice::contains(const IntVec& v) const {
    IntVec x;
    return solve_exact_vec(basis_, v, x);
}

bool Lattice::contains(const Lattice& other) const {
    if (ambient_ != other.ambient_)
        throw Error(ErrorKind::AmbientMismatch, "ambient rank mismatch");
    IntMat x;
    return solve_exact(basis_, other.basis_, x);
}

IntVec Lattice::coset_rep(const IntVec& v) const {
    IntVec rep = v;
    int c = 0;
    for (int r = 0; r < ambient_ && c < rank(); ++r) {
        if (basis_.at(r, c) == 0) continue;
        Int q;
        mpz_fdiv_q(q.get_mpz_t(), rep[r].get_mpz_t(), basis_.at(r, c).get_mpz_t());
        if (q != 0)
            for (int rr = 0; rr < ambient_; ++rr) rep[rr] -= q * basis_.at(rr, c);
        ++c;
    }
    return rep;
}

IntVec Lattice::coordinates(const IntVec& v) const {
    IntVec x;
    if (!solve_exact_vec(basis_, v, x))
        throw Error(ErrorKind::Internal, "coordinates: vector not in lattice");
    return x;
}

bool Lattice::operator<(const Lattice& o) const {
    if (ambient_ != o.ambient_) return ambient_ < o.ambient_;
    if (rank() != o.rank()) return rank() < o.rank();
    for (int r = 0; r < ambient_; ++r)
        for (int c = 0; c < rank(); ++c) {
            int s = cmp(basis_.at(r, c), o.basis_.at(r, c));
            if (s) return s < 0;
        }
    return false;
}

std::string Lattice::str() const {
    std::ostringstream os;
    os << "L" << ambient_ << basis_.str();
    return os.str();
}

Lattice canonicalize(const IntMat& gens, int ambient_rank) { return Lattice(ambient_rank, gens); }

namespace {

// index of sub in sup, both of equal rank and sub <= sup
Int finite_index(const Lattice& sub, const Lattice& sup) {
    IntMat coords;
    if (!solve_exact(sup.basis(), sub.basis(), coords))
        throw Error(ErrorKind::Internal, "finite_index: not a sublattice");
    return abs(coords.det());
}

}  // namespace

CompareResult compare(const Lattice& a, const Lattice& b) {
    if (a.ambient_rank() != b.ambient_rank())
        throw Error(ErrorKind::AmbientMismatch, "compare: ambient rank mismatch");
    bool ab = b.contains(a);
    bool ba = a.contains(b);
    CompareResult res;
    if (ab && ba) {
        res.rel = Relation::Equal;
        return res;
    }
    if (ab) {
        res.rel = Relation::ProperSub;
        if (a.rank() == b.rank()) {
            res.index.finite = true;
            res.index.index = finite_index(a, b);
        }
        return res;
    }
    if (ba) {
        res.rel = Relation::ProperSup;
        if (a.rank() == b.rank()) {
            res.index.finite = true;
            res.index.index = finite_index(b, a);
        }
        return res;
    }
    res.rel = Relation::Incomparable;
    return res;
}

Lattice join(const Lattice& a, const Lattice& b) {
    if (a.ambient_rank() != b.ambient_rank())
        throw Error(ErrorKind::AmbientMismatch, "join: ambient rank mismatch");
    return Lattice(a.ambient_rank(), a.basis().hstack(b.basis()));
}

Lattice meet(const Lattice& a, const Lattice& b) {
    if (a.ambient_rank() != b.ambient_rank())
        throw Error(ErrorKind::AmbientMismatch, "meet: ambient rank mismatch");
    if (a.rank() == 0 || b.rank() == 0) return Lattice::trivial(a.ambient_rank());
    IntMat stacked = a.basis().hstack(b.basis().negated());
    IntMat ker = kernel(stacked);  // (ra+rb) x k
    IntMat xs(a.rank(), ker.cols());
    for (int r = 0; r < a.rank(); ++r)
        for (int c = 0; c < ker.cols(); ++c) xs.at(r, c) = ker.at(r, c);
    return Lattice(a.ambient_rank(), a.basis().mul(xs));
}

std::pair<Lattice, Lattice> meet_join(const Lattice& a, const Lattice& b) {
    return {meet(a, b), join(a, b)};
}

std::vector<Lattice> intermediate_lattices(const Lattice& low, size_t cap) {
    int n = low.ambient_rank();
    if (low.rank() != n)
        throw Error(ErrorKind::Internal, "intermediate_lattices: lower lattice not full rank");
    // Enumerate lower-triangular column-HNF matrices H (pivots on the
    // diagonal, 0 <= H[i][k] < H[i][i] for k < i) whose span contains `low`.
    Int det_low = 1;
    for (int i = 0; i < n; ++i) det_low *= low.basis().at(i, i);
    // divisors of det_low
    std::vector<Int> divisors{Int(1)};
    for (auto& [p, e] : factorize(det_low)) {
        std::vector<Int> next;
        Int pk = 1;
        for (int i = 0; i <= e; ++i) {
            for (auto& d : divisors) next.push_back(d * pk);
            pk *= p;
        }
        divisors = next;
    }
    std::sort(divisors.begin(), divisors.end());

    std::vector<Lattice> out;
    IntMat h(n, n);
    std::vector<Int> diag(n);
    // recursive enumeration over columns
    std::function<void(int)> rec = [&](int col) {
        if ((size_t)out.size() > cap)
            throw Error(ErrorKind::Internal, "intermediate lattice enumeration exceeded cap");
        if (col == n) {
            Lattice cand(n, h);
            if (cand.contains(low)) out.push_back(cand);
            return;
        }
        for (const Int& d : divisors) {
            h.at(col, col) = d;
            // off-diagonal entries in row `col` of earlier columns range over [0, d)
            std::function<void(int)> fill = [&](int k) {
                if (k == col) {
                    rec(col + 1);
                    return;
                }
                for (Int v = 0; v < d; ++v) {
                    h.at(col, k) = v;
                    fill(k + 1);
                }
                h.at(col, k) = 0;
            };
            fill(0);
            h.at(col, col) = 0;
        }
    };
    rec(0);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<std::pair<Int, int>> factorize(Int n) {
    std::vector<std::pair<Int, int>> out;
    n = abs(n);
    if (n <= 1) return out;
    for (Int p = 2; p * p <= n && p < 100000; p += (p == 2 ? 1 : 2)) {
        if (n % p == 0) {
            int e = 0;
            while (n % p == 0) {
                n /= p;
                ++e;
            }
            out.push_back({p, e});
        }
    }
    if (n > 1) {
        // mpz probable-prime check; fall back to rho for composites
        std::function<void(Int)> split = [&](Int m) {
            if (m == 1) return;
            if (mpz_probab_prime_p(m.get_mpz_t(), 30)) {
                bool merged = false;
                for (auto& [p, e] : out)
                    if (p == m) {
                        ++e;
                        merged = true;
                    }
                if (!merged) out.push_back({m, 1});
                return;
            }
            // Pollard rho
            Int x = 2, y = 2, d = 1, c = 1;
            while (d == 1 || d == m) {
                x = (x * x + c) % m;
                y = (y * y + c) % m;
                y = (y * y + c) % m;
                Int diff = abs(x - y);
                if (diff == 0) {
                    ++c;
                    x = 2;
                    y = 2;
                    d = 1;
                    continue;
                }
                mpz_gcd(d.get_mpz_t(), diff.get_mpz_t(), m.get_mpz_t());
            }
            split(d);
            split(m / d);
        };
        split(n);
    }
    std::sort(out.begin(), out.end());
    return out;
}

RationalSubgroup rational_subgroup(const std::vector<Rat>& gens) {
    std::map<Int, int> prime_index;
    std::vector<std::map<Int, int>> vals;
    for (const Rat& q : gens) {
        std::map<Int, int> v;
        for (auto& [p, e] : factorize(Int(q.get_num()))) v[p] += e;
        for (auto& [p, e] : factorize(Int(q.get_den()))) v[p] -= e;
        for (auto& [p, e] : v)
            if (e != 0) prime_index.emplace(p, 0);
        vals.push_back(std::move(v));
    }
    RationalSubgroup out;
    int idx = 0;
    for (auto& [p, i] : prime_index) {
        i = idx++;
        out.primes.push_back(p);
    }
    IntMat m((int)out.primes.size(), (int)vals.size());
    for (int c = 0; c < (int)vals.size(); ++c)
        for (auto& [p, e] : vals[c])
            if (e != 0) m.at(prime_index[p], c) = e;
    out.valuation_lattice = hnf_cols(m);
    // drop primes with all-zero rows to make the description minimal
    std::vector<int> keep;
    for (int r = 0; r < m.rows(); ++r) {
        bool nz = false;
        for (int c = 0; c < out.valuation_lattice.cols(); ++c)
            if (out.valuation_lattice.at(r, c) != 0) nz = true;
        if (nz) keep.push_back(r);
    }
    if ((int)keep.size() != m.rows()) {
        IntMat trimmed((int)keep.size(), out.valuation_lattice.cols());
        std::vector<Int> primes2;
        for (int i = 0; i < (int)keep.size(); ++i) {
            primes2.push_back(out.primes[keep[i]]);
            for (int c = 0; c < out.valuation_lattice.cols(); ++c)
                trimmed.at(i, c) = out.valuation_lattice.at(keep[i], c);
        }
        out.primes = primes2;
        out.valuation_lattice = hnf_cols(trimmed);
    }
    return out;
}

std::string RationalSubgroup::str() const {
    std::ostringstream os;
    os << "<primes:";
    for (auto& p : primes) os << " " << p.get_str();
    os << " | " << valuation_lattice.str() << ">";
    return os.str();
}

}  // namespace jsjforge
