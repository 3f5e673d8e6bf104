#pragma once

// Symmetric group S_k combinatorics. Permutations act on tensor factors of
// H^(⊗k) by the subsystem-permuting representation P_d; all we ever need from
// that representation are traces, and those reduce to cycle data:
//
//   Tr[P_d(p)]            = d^(number of cycles of p)
//   Tr[(rho_1⊗…⊗rho_k) P_d(p)] = product over cycles of Tr[rho_{c_1} rho_{c_2} …]
//
// so nothing here materializes a d^k-dimensional object. Indices are 0-based
// throughout (cycle notation in comments follows the same convention).

#include <complex>
#include <vector>

#include "qgp/inner_products.hpp"
#include "qgp/rational.hpp"

namespace qgp::perm {

struct Permutation {
    // One-line notation: i maps to image[i].
    std::vector<int> image;

    int k() const { return static_cast<int>(image.size()); }
    int operator()(int i) const { return image[i]; }
    bool operator==(const Permutation& o) const { return image == o.image; }
    bool operator<(const Permutation& o) const { return image < o.image; }
    bool is_identity() const;
};

// Counts of cycles by length: nu[j-1] = number of j-cycles, sum j*nu[j-1] = k.
struct CycleType {
    std::vector<int> nu;
    bool operator==(const CycleType& o) const { return nu == o.nu; }
};

Permutation identity(int k);

// Validates that image is a bijection of {0..k-1}.
bool is_valid(const Permutation& p);

// (a∘b)(i) = a(b(i));  P_d(a∘b) = P_d(a)·P_d(b).
Permutation compose(const Permutation& a, const Permutation& b);
Permutation inverse(const Permutation& p);

// Canonical cycle decomposition: each cycle starts at its minimum element and
// follows i -> p(i); cycles sorted by their minima; 1-cycles included.
std::vector<std::vector<int>> cycle_decomposition(const Permutation& p);
CycleType cycle_type(const Permutation& p);
int cycle_count(const Permutation& p);

// Character of the subsystem-permuting representation, d^(#cycles).
// Arbitrary precision: d = 2^18 at k = 8 overflows any fixed-width integer.
Integer character(const Permutation& p, long d);

// All k! elements in lexicographic one-line order. Enumeration is cheap; the
// default cap of 8 (40320 elements) exists because nothing downstream can use
// more, not because we run out of memory much beyond it.
std::vector<Permutation> enumerate_group(int k, int max_k = 8);

// The set T_k: fixed-point-free involutions = products of k/2 disjoint
// transpositions. Count: k!/(2^(k/2) (k/2)!). Throws on odd k.
std::vector<Permutation> enumerate_pairings(int k, int max_k = 16);

// Number of elements of T_k, (k-1)!! for even k, as a double (used in
// asymptotic formulas) and as an exact integer.
Integer pairing_count(int k);

// Tr[P_d(p) · O^(⊗k)] for the fixed observable class (traceless, O² = 1):
// each cycle of length L contributes Tr[O^L] = d (L even) or 0 (L odd).
// Zero whenever k is odd; d^r when all r cycles are even.
Integer trace_obs_power(const Permutation& p, long d);

// Tr[(rho_{a(0)} ⊗ … ⊗ rho_{a(k-1)}) P_d(p)] for pure states, evaluated as a
// product of inner products around each cycle. `a` (the assignment) maps
// tensor slots to rows of G.
std::complex<double> trace_state_product(const Permutation& p, const Eigen::MatrixXcd& g,
                                         const std::vector<int>& assignment);

// Same contraction over exact rational inner products (real case).
Rational trace_state_product_exact(const Permutation& p, const RationalMatrix& g,
                                   const std::vector<int>& assignment);

}  // namespace qgp::perm
