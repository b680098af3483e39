#ifndef JSJFORGE_INTMAT_HPP
#define JSJFORGE_INTMAT_HPP

#include <gmpxx.h>
#include <string>
#include <vector>

namespace jsjforge {

using Int = mpz_class;
using Rat = mpq_class;
using IntVec = std::vector<Int>;

// Dense integer matrix, row major, arbitrary precision entries.
class IntMat {
public:
    IntMat() : rows_(0), cols_(0) {}
    IntMat(int rows, int cols) : rows_(rows), cols_(cols), data_(size_t(rows) * cols, Int(0)) {}

    static IntMat identity(int n);
    static IntMat from_rows(int rows, int cols, std::initializer_list<long> vals);
    static IntMat column(const IntVec& v);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }

    Int& at(int r, int c) { return data_[size_t(r) * cols_ + c]; }
    const Int& at(int r, int c) const { return data_[size_t(r) * cols_ + c]; }

    IntVec col(int c) const;
    void set_col(int c, const IntVec& v);
    IntMat transpose() const;
    IntMat mul(const IntMat& other) const;
    IntVec mul_vec(const IntVec& v) const;
    IntMat hstack(const IntMat& other) const;
    IntMat vstack(const IntMat& other) const;
    IntMat sub_cols(int first, int count) const;
    IntMat negated() const;

    bool operator==(const IntMat& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_ && data_ == other.data_;
    }
    bool operator!=(const IntMat& other) const { return !(*this == other); }

    int rank() const;
    Int det() const;  // square only
    std::string str() const;

private:
    int rows_, cols_;
    std::vector<Int> data_;
};

// Column-style Hermite normal form: returns H with H = A * U for a unimodular
// U. Zero columns are dropped; the pivot of column j sits strictly below the
// pivot of column j-1, pivots positive, entries left of a pivot in its row
// reduced into [0, pivot). H is the unique such basis of the column span.
IntMat hnf_cols(const IntMat& a);

// Same, also reporting U (a.cols() x a.cols(), unimodular) with a*U = [H | 0].
IntMat hnf_cols_transform(const IntMat& a, IntMat& u_out);

// Row-style HNF: unique representative of the left GL_n(Z) orbit (zero rows
// dropped). Used to pin a canonical coordinate frame on a vertex group.
IntMat hnf_rows(const IntMat& a);
IntMat hnf_rows_transform(const IntMat& a, IntMat& u_out);  // u_out * a = H (u unimodular)

// Basis of the integer kernel of a (columns x of a*x = 0).
IntMat kernel(const IntMat& a);

// Solve m * x = b exactly over Z, m of full column rank. Empty optional when
// no integer solution exists.
bool solve_exact(const IntMat& m, const IntMat& b, IntMat& x_out);
bool solve_exact_vec(const IntMat& m, const IntVec& b, IntVec& x_out);

// Diagonal of the Smith normal form (elementary divisors d1 | d2 | ..., zeros
// for rank deficiency dropped).
std::vector<Int> smith_divisors(const IntMat& a);

std::string vec_str(const IntVec& v);

}  // namespace jsjforge

#endif
