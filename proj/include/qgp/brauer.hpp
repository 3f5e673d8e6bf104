#pragma once

// Brauer algebra B_k(d) combinatorics. Elements are perfect matchings of 2k
// points; we label 0..k-1 as the "bottom" (ket) row and k..2k-1 as the "top"
// (bra) row. The operator F_d(s) attached to a diagram contracts tensor
// indices along its pairs:
//   bottom t — top t'   contributes delta(i_t, j_t')
//   bottom t — bottom t' contributes delta(i_t, i_t')
//   top t    — top t'    contributes delta(j_t, j_t')
// Matchings whose pairs all span bottom-top are exactly the embedded S_k, and
// F_d restricted to them coincides with the subsystem-permuting P_d.
//
// Composition of diagrams can close loops, each worth a factor d:
//   F_d(a) · F_d(b) = d^(loops) · F_d(a∘b).
// As with perm, every production computation here is pure combinatorics; the
// dense d^k-dimensional operators exist only inside test oracles.

#include <utility>
#include <vector>

#include "qgp/inner_products.hpp"
#include "qgp/perm.hpp"
#include "qgp/rational.hpp"

namespace qgp::brauer {

struct PairPartition {
    // partner[p] = the point p is matched with; an involution of {0..2k-1}
    // with no fixed points. This storage is already canonical (two diagrams
    // are equal iff their partner arrays are equal).
    std::vector<int> partner;

    int k() const { return static_cast<int>(partner.size()) / 2; }
    bool operator==(const PairPartition& o) const { return partner == o.partner; }
    bool operator<(const PairPartition& o) const { return partner < o.partner; }

    // The k pairs as (min, max), sorted by first element.
    std::vector<std::pair<int, int>> pairs() const;
};

// Counts of Brauer cycles by length; sum of j*nu[j-1] = k.
struct BrauerCycleType {
    std::vector<int> nu;
    bool operator==(const BrauerCycleType& o) const { return nu == o.nu; }
};

bool is_valid(const PairPartition& s);

PairPartition identity_diagram(int k);

// Bottom t — top p(t): the diagram with F_d = P_d(p).
PairPartition from_permutation(const perm::Permutation& p);

// True iff every pair spans bottom-top (the embedded S_k).
bool is_permutation_diagram(const PairPartition& s);

// Inverse of from_permutation; only valid on permutation diagrams.
perm::Permutation to_permutation(const PairPartition& s);

// All (2k-1)!! perfect matchings, deterministic order.
std::vector<PairPartition> enumerate_brauer(int k, int max_k = 6);

// Swap bottom and top labels pairwise (point p <-> p±k). An involution; on
// the embedded S_k it is the group inverse.
PairPartition transpose(const PairPartition& s);

// Diagrammatic composition: glue b's top row to a's bottom row and follow
// paths. Returns the resulting diagram and the number of closed loops, so
// that F_d(a)·F_d(b) = d^loops · F_d(result).
std::pair<PairPartition, int> brauer_compose(const PairPartition& a, const PairPartition& b);

// Brauer cycles: orbits of the points under the pair (partner, bar) where
// bar(p) = p±k exchanges the two index slots of a tensor factor. Each orbit
// has even size; its length is size/2, and lengths sum to k.
std::vector<std::vector<int>> brauer_cycles(const PairPartition& s);
BrauerCycleType brauer_cycle_type(const PairPartition& s);

// Tr[F_d(s)] = d^(number of Brauer cycles).
Integer character(const PairPartition& s, long d);

// Tr[F_d(s) · O^(⊗k)] for the fixed observable class (traceless, symmetric,
// O² = 1): each cycle of length L contributes Tr[O^L], which is d for even L
// and 0 for odd L. Hence 0 if any cycle is odd (always true for odd k), and
// d^r when all r cycles are even.
Integer trace_obs_power(const PairPartition& s, long d);

// Tr[(rho_{a(0)} ⊗ … ⊗ rho_{a(k-1)}) F_d(s)] for *real* pure states: each
// pair (p, q) contracts to the inner product of the states sitting on slots
// p mod k and q mod k, so the trace is a plain product over pairs.
double trace_state_product_brauer(const PairPartition& s, const Eigen::MatrixXd& g_real,
                                  const std::vector<int>& assignment);
Rational trace_state_product_brauer_exact(const PairPartition& s, const RationalMatrix& g,
                                          const std::vector<int>& assignment);

}  // namespace qgp::brauer
