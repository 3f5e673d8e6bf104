#include "qgp/rational.hpp"

namespace qgp {

RationalMatrix RationalMatrix::identity(int n) {
    RationalMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

RationalMatrix RationalMatrix::multiply(const RationalMatrix& rhs) const {
    if (cols_ != rhs.rows_) throw Error("RationalMatrix::multiply: shape mismatch");
    RationalMatrix out(rows_, rhs.cols_);
    for (int i = 0; i < rows_; ++i) {
        for (int k = 0; k < cols_; ++k) {
            const Rational& aik = (*this)(i, k);
            if (aik == 0) continue;
            for (int j = 0; j < rhs.cols_; ++j) {
                out(i, j) += aik * rhs(k, j);
            }
        }
    }
    return out;
}

bool RationalMatrix::is_identity() const {
    if (rows_ != cols_) return false;
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j)
            if ((*this)(i, j) != (i == j ? 1 : 0)) return false;
    return true;
}

bool RationalMatrix::is_symmetric() const {
    if (rows_ != cols_) return false;
    for (int i = 0; i < rows_; ++i)
        for (int j = i + 1; j < cols_; ++j)
            if ((*this)(i, j) != (*this)(j, i)) return false;
    return true;
}

RationalMatrix invert(const RationalMatrix& m) {
    if (m.rows() != m.cols()) throw Error("invert: matrix must be square");
    const int n = m.rows();
    RationalMatrix a = m;
    RationalMatrix inv = RationalMatrix::identity(n);

    for (int col = 0; col < n; ++col) {
        // Find a nonzero pivot in this column; exact arithmetic means any
        // nonzero entry will do.
        int pivot = -1;
        for (int r = col; r < n; ++r) {
            if (a(r, col) != 0) {
                pivot = r;
                break;
            }
        }
        if (pivot < 0) throw SingularGramError("invert: singular matrix, zero column " + std::to_string(col));
        if (pivot != col) {
            for (int j = 0; j < n; ++j) {
                swap(a(pivot, j), a(col, j));
                swap(inv(pivot, j), inv(col, j));
            }
        }
        const Rational p = a(col, col);
        for (int j = 0; j < n; ++j) {
            a(col, j) /= p;
            inv(col, j) /= p;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col || a(r, col) == 0) continue;
            const Rational f = a(r, col);
            for (int j = 0; j < n; ++j) {
                a(r, j) -= f * a(col, j);
                inv(r, j) -= f * inv(col, j);
            }
        }
    }
    return inv;
}

double to_double(const Rational& q) { return q.get_d(); }

std::string to_decimal_string(const Integer& z) { return z.get_str(10); }

Rational rational_from_strings(const std::string& num, const std::string& den) {
    Integer n(num, 10), d(den, 10);
    if (d == 0) throw Error("rational_from_strings: zero denominator");
    Rational q(n, d);
    q.canonicalize();
    return q;
}

Integer ipow(long d, int e) {
    Integer out;
    mpz_ui_pow_ui(out.get_mpz_t(), static_cast<unsigned long>(d), static_cast<unsigned long>(e));
    return out;
}

}  // namespace qgp
