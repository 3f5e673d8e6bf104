#pragma once

// Exact rational arithmetic, backed by GMP. Everything downstream that claims
// "exact" (Gram matrices, Weingarten inverses, covariance identities) runs on
// these types, so there is no tolerance anywhere in that code path.

#include <gmpxx.h>

#include <string>
#include <vector>

#include "qgp/errors.hpp"

namespace qgp {

using Integer = mpz_class;
using Rational = mpq_class;

// Dense matrix of rationals. Small (hundreds of rows), so a flat vector with
// row-major indexing is all we need.
class RationalMatrix {
public:
    RationalMatrix() : rows_(0), cols_(0) {}
    RationalMatrix(int rows, int cols)
        : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols, Rational(0)) {}

    static RationalMatrix identity(int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    Rational& operator()(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
    const Rational& operator()(int i, int j) const {
        return a_[static_cast<size_t>(i) * cols_ + j];
    }

    bool operator==(const RationalMatrix& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_ && a_ == other.a_;
    }

    RationalMatrix multiply(const RationalMatrix& rhs) const;
    bool is_identity() const;
    bool is_symmetric() const;

private:
    int rows_, cols_;
    std::vector<Rational> a_;
};

// Exact inverse by Gauss-Jordan elimination on [A | I]. Pivoting only needs a
// nonzero entry (there is no rounding to stabilize); we take the first one in
// the column. Throws SingularGramError when no pivot exists.
RationalMatrix invert(const RationalMatrix& m);

// Helpers for serialization and for handing exact values to float code.
double to_double(const Rational& q);
std::string to_decimal_string(const Integer& z);
Rational rational_from_strings(const std::string& num, const std::string& den);

// d^e as an exact integer (e >= 0).
Integer ipow(long d, int e);

}  // namespace qgp
