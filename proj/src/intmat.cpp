#include "jsjforge/intmat.hpp"

#include <sstream>
#include <stdexcept>

namespace jsjforge {

IntMat IntMat::identity(int n) {
    IntMat m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

IntMat IntMat::from_rows(int rows, int cols, std::initializer_list<long> vals) {
    IntMat m(rows, cols);
    if ((int)vals.size() != rows * cols) throw std::invalid_argument("from_rows: size mismatch");
    auto it = vals.begin();
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) m.at(r, c) = Int(*it++);
    return m;
}

IntMat IntMat::column(const IntVec& v) {
    IntMat m((int)v.size(), 1);
    for (int i = 0; i < (int)v.size(); ++i) m.at(i, 0) = v[i];
    return m;
}

IntVec IntMat::col(int c) const {
    IntVec v(rows_);
    for (int r = 0; r < rows_; ++r) v[r] = at(r, c);
    return v;
}

void IntMat::set_col(int c, const IntVec& v) {
    for (int r = 0; r < rows_; ++r) at(r, c) = v[r];
}

IntMat IntMat::transpose() const {
    IntMat m(cols_, rows_);
    for (int r = 0; r < rows_; ++r)
        for (int c = 0; c < cols_; ++c) m.at(c, r) = at(r, c);
    return m;
}

IntMat IntMat::mul(const IntMat& other) const {
    if (cols_ != other.rows_) throw std::invalid_argument("mul: dimension mismatch");
    IntMat m(rows_, other.cols_);
    for (int r = 0; r < rows_; ++r)
        for (int k = 0; k < cols_; ++k) {
            const Int& a = at(r, k);
            if (a == 0) continue;
            for (int c = 0; c < other.cols_; ++c) m.at(r, c) += a * other.at(k, c);
        }
    return m;
}

IntVec IntMat::mul_vec(const IntVec& v) const {
    if ((int)v.size() != cols_) throw std::invalid_argument("mul_vec: dimension mismatch");
    IntVec out(rows_, Int(0));
    for (int r = 0; r < rows_; ++r)
        for (int c = 0; c < cols_; ++c)
            if (at(r, c) != 0) out[r] += at(r, c) * v[c];
    return out;
}

IntMat IntMat::hstack(const IntMat& other) const {
    if (rows_ != other.rows_) throw std::invalid_argument("hstack: row mismatch");
    IntMat m(rows_, cols_ + other.cols_);
    for (int r = 0; r < rows_; ++r) {
        for (int c = 0; c < cols_; ++c) m.at(r, c) = at(r, c);
        for (int c = 0; c < other.cols_; ++c) m.at(r, cols_ + c) = other.at(r, c);
    }
    return m;
}

IntMat IntMat::vstack(const IntMat& other) const {
    if (cols_ != other.cols_) throw std::invalid_argument("vstack: col mismatch");
    IntMat m(rows_ + other.rows_, cols_);
    for (int r = 0; r < rows_; ++r)
        for (int c = 0; c < cols_; ++c) m.at(r, c) = at(r, c);
    for (int r = 0; r < other.rows_; ++r)
        for (int c = 0; c < cols_; ++c) m.at(rows_ + r, c) = other.at(r, c);
    return m;
}

IntMat IntMat::sub_cols(int first, int count) const {
    IntMat m(rows_, count);
    for (int r = 0; r < rows_; ++r)
        for (int c = 0; c < count; ++c) m.at(r, c) = at(r, first + c);
    return m;
}

IntMat IntMat::negated() const {
    IntMat m(rows_, cols_);
    for (int r = 0; r < rows_; ++r)
        for (int c = 0; c < cols_; ++c) m.at(r, c) = -at(r, c);
    return m;
}

std::string IntMat::str() const {
    std::ostringstream os;
    os << rows_ << "x" << cols_ << "[";
    for (int r = 0; r < rows_; ++r) {
        if (r) os << "; ";
        for (int c = 0; c < cols_; ++c) {
            if (c) os << " ";
            os << at(r, c).get_str();
        }
    }
    os << "]";
    return os.str();
}

std::string vec_str(const IntVec& v) {
    std::ostringstream os;
    os << "(";
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) os << ",";
        os << v[i].get_str();
    }
    os << ")";
    return os.str();
}

namespace {

void col_axpy(IntMat& m, int dst, int src, const Int& q) {
    // col_dst -= q * col_src
    for (int r = 0; r < m.rows(); ++r) m.at(r, dst) -= q * m.at(r, src);
}

void col_swap(IntMat& m, int a, int b) {
    for (int r = 0; r < m.rows(); ++r) std::swap(m.at(r, a), m.at(r, b));
}

void col_negate(IntMat& m, int c) {
    for (int r = 0; r < m.rows(); ++r) m.at(r, c) = -m.at(r, c);
}

// Column echelon reduction tracking an optional unimodular transform.
// Returns the number of pivot columns; pivot columns are moved to the front.
int echelon_cols(IntMat& h, IntMat* u) {
    int lead = 0;
    for (int row = 0; row < h.rows() && lead < h.cols(); ++row) {
        // Eliminate until at most one column >= lead has a nonzero entry in
        // this row.
        while (true) {
            int best = -1, second = -1;
            for (int c = lead; c < h.cols(); ++c) {
                if (h.at(row, c) == 0) continue;
                if (best == -1 || cmp(abs(h.at(row, c)), abs(h.at(row, best))) < 0) {
                    second = best;
                    best = c;
                } else if (second == -1 || cmp(abs(h.at(row, c)), abs(h.at(row, second))) < 0) {
                    second = c;
                }
            }
            if (second == -1) {
                if (best == -1) break;  // all zero in this row
                // single nonzero: make it the lead column
                if (best != lead) {
                    col_swap(h, best, lead);
                    if (u) col_swap(*u, best, lead);
                }
                if (h.at(row, lead) < 0) {
                    col_negate(h, lead);
                    if (u) col_negate(*u, lead);
                }
                // reduce earlier pivot columns against this pivot row
                for (int c = 0; c < lead; ++c) {
                    Int q;
                    mpz_fdiv_q(q.get_mpz_t(), h.at(row, c).get_mpz_t(), h.at(row, lead).get_mpz_t());
                    if (q != 0) {
                        col_axpy(h, c, lead, q);
                        if (u) col_axpy(*u, c, lead, q);
                    }
                }
                ++lead;
                break;
            }
            // reduce the larger entry (column `second`) by the smaller one
            Int q;
            mpz_fdiv_q(q.get_mpz_t(), h.at(row, second).get_mpz_t(), h.at(row, best).get_mpz_t());
            col_axpy(h, second, best, q);
            if (u) col_axpy(*u, second, best, q);
        }
    }
    return lead;
}

}  // namespace

IntMat hnf_cols(const IntMat& a) {
    IntMat h = a;
    int r = echelon_cols(h, nullptr);
    return h.sub_cols(0, r);
}

IntMat hnf_cols_transform(const IntMat& a, IntMat& u_out) {
    IntMat h = a;
    u_out = IntMat::identity(a.cols());
    echelon_cols(h, &u_out);
    return h;
}

IntMat hnf_rows(const IntMat& a) {
    return hnf_cols(a.transpose()).transpose();
}

IntMat hnf_rows_transform(const IntMat& a, IntMat& u_out) {
    IntMat at = a.transpose();
    IntMat ut;
    IntMat h = hnf_cols_transform(at, ut);
    u_out = ut.transpose();
    return h.transpose();
}

IntMat kernel(const IntMat& a) {
    IntMat h = a;
    IntMat u = IntMat::identity(a.cols());
    int r = echelon_cols(h, &u);
    return u.sub_cols(r, a.cols() - r);
}

bool solve_exact(const IntMat& m, const IntMat& b, IntMat& x_out) {
    if (m.rows() != b.rows()) throw std::invalid_argument("solve_exact: row mismatch");
    IntMat u;
    IntMat h = hnf_cols_transform(m, u);  // m*u = h (trailing zero cols possible)
    // locate pivots
    std::vector<std::pair<int, int>> pivots;  // (row, col)
    int c = 0;
    for (int r = 0; r < h.rows() && c < h.cols(); ++r) {
        if (h.at(r, c) != 0) pivots.push_back({r, c++});
    }
    int rank = (int)pivots.size();
    IntMat y(m.cols(), b.cols());
    IntMat resid = b;
    for (int bc = 0; bc < b.cols(); ++bc) {
        int next_piv = 0;
        for (int r = 0; r < m.rows(); ++r) {
            if (next_piv < rank && pivots[next_piv].first == r) {
                Int q, rem;
                mpz_fdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), resid.at(r, bc).get_mpz_t(),
                            h.at(r, pivots[next_piv].second).get_mpz_t());
                if (rem != 0) return false;
                if (q != 0)
                    for (int rr = r; rr < m.rows(); ++rr)
                        resid.at(rr, bc) -= q * h.at(rr, pivots[next_piv].second);
                y.at(pivots[next_piv].second, bc) = q;
                ++next_piv;
            } else if (resid.at(r, bc) != 0) {
                return false;
            }
        }
    }
    x_out = u.mul(y);
    return true;
}

bool solve_exact_vec(const IntMat& m, const IntVec& b, IntVec& x_out) {
    IntMat x;
    if (!solve_exact(m, IntMat::column(b), x)) return false;
    x_out = x.col(0);
    return true;
}

int IntMat::rank() const {
    IntMat h = *this;
    return echelon_cols(h, nullptr);
}

Int IntMat::det() const {
    if (rows_ != cols_) throw std::invalid_argument("det: not square");
    // fraction-free Gaussian (Bareiss)
    IntMat m = *this;
    Int denom = 1, sign = 1;
    int n = rows_;
    for (int k = 0; k < n - 1; ++k) {
        if (m.at(k, k) == 0) {
            int p = -1;
            for (int r = k + 1; r < n; ++r)
                if (m.at(r, k) != 0) { p = r; break; }
            if (p == -1) return 0;
            for (int c = 0; c < n; ++c) std::swap(m.at(k, c), m.at(p, c));
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j) {
                Int num = m.at(i, j) * m.at(k, k) - m.at(i, k) * m.at(k, j);
                mpz_divexact(m.at(i, j).get_mpz_t(), num.get_mpz_t(), denom.get_mpz_t());
            }
        denom = m.at(k, k);
    }
    return sign * m.at(n - 1, n - 1);
}

std::vector<Int> smith_divisors(const IntMat& a) {
    IntMat m = a;
    int n = m.rows(), k = m.cols();
    std::vector<Int> divs;
    int off = 0;
    while (off < n && off < k) {
        // find a nonzero pivot in the submatrix
        int pr = -1, pc = -1;
        for (int r = off; r < n && pr == -1; ++r)
            for (int c = off; c < k; ++c)
                if (m.at(r, c) != 0) { pr = r; pc = c; break; }
        if (pr == -1) break;
        for (int c = 0; c < k; ++c) std::swap(m.at(off, c), m.at(pr, c));
        for (int r = 0; r < n; ++r) std::swap(m.at(r, off), m.at(r, pc));
        bool again = true;
        while (again) {
            again = false;
            for (int r = off + 1; r < n; ++r) {
                if (m.at(r, off) == 0) continue;
                Int q;
                mpz_fdiv_q(q.get_mpz_t(), m.at(r, off).get_mpz_t(), m.at(off, off).get_mpz_t());
                for (int c = off; c < k; ++c) m.at(r, c) -= q * m.at(off, c);
                if (m.at(r, off) != 0) {
                    for (int c = off; c < k; ++c) std::swap(m.at(off, c), m.at(r, c));
                    again = true;
                }
            }
            for (int c = off + 1; c < k; ++c) {
                if (m.at(off, c) == 0) continue;
                Int q;
                mpz_fdiv_q(q.get_mpz_t(), m.at(off, c).get_mpz_t(), m.at(off, off).get_mpz_t());
                for (int r = off; r < n; ++r) m.at(r, c) -= q * m.at(r, off);
                if (m.at(off, c) != 0) {
                    for (int r = off; r < n; ++r) std::swap(m.at(r, off), m.at(r, c));
                    again = true;
                }
            }
        }
        divs.push_back(abs(m.at(off, off)));
        ++off;
    }
    // enforce divisibility chain
    for (size_t i = 0; i + 1 < divs.size(); ++i)
        for (size_t j = i + 1; j < divs.size(); ++j) {
            Int g, l;
            mpz_gcd(g.get_mpz_t(), divs[i].get_mpz_t(), divs[j].get_mpz_t());
            l = divs[i] / g * divs[j];
            divs[i] = g;
            divs[j] = l;
        }
    return divs;
}

}  // namespace jsjforge
