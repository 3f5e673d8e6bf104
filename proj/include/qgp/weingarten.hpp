#pragma once

// Exact moments of Haar-random encodings via commutant averaging.
//
// For U drawn from the unitary or orthogonal group on C^d, the twirl
// E[U^(⊗k) X (U†)^(⊗k)] lands in the commutant of the diagonal action. The
// commutant is spanned by the subsystem permutations P_d(σ) (unitary case)
// or by the Brauer diagram operators F_d(s) (orthogonal case). Writing the
// twirl as Σ_ν c_ν P_ν and matching traces against every basis element gives
// a linear system with the Gram matrix A[ν][μ] = Tr[P_ν P_μ], so
//
//   E[ Π_t <ψ_{a(t)}| U† O U |ψ_{a(t)}> ] = Σ_{ν,μ} W[ν][μ] · Tr[Λ P_μ] · Tr[P_ν O^(⊗k)]
//
// with W = A^(-1) (the Weingarten matrix) and Λ the tensor product of the
// state projectors in slot order. A has integer entries (powers of d), so W
// is exactly representable over the rationals and the whole pipeline runs in
// exact arithmetic whenever the state inner products do.

#include <optional>
#include <string>
#include <vector>

#include "qgp/brauer.hpp"
#include "qgp/inner_products.hpp"
#include "qgp/perm.hpp"
#include "qgp/rational.hpp"

namespace qgp::weingarten {

enum class Group { unitary, orthogonal };

std::string to_string(Group g);
Group group_from_string(const std::string& name);

// Largest moment order the exact inversion accepts by default. The basis has
// k! (unitary) or (2k-1)!! (orthogonal) elements and inversion is cubic in
// that, so these defaults keep the worst case at a 720x720 rational solve.
int default_k_max(Group g);

struct WeingartenTable {
    Group group;
    int k = 0;
    long d = 0;

    // Exactly one of these is populated, in the enumeration order of its
    // module; rows/columns of `gram` and `wg` are indexed against it.
    std::vector<perm::Permutation> perm_basis;
    std::vector<brauer::PairPartition> brauer_basis;

    RationalMatrix gram;  // A[ν][μ] = Tr[P_ν P_μ], integer entries
    RationalMatrix wg;    // A^(-1)

    int size() const { return gram.rows(); }
};

// The Gram matrix alone (integer entries):
//   unitary:    Tr[P(ν)P(μ)] = d^(cycles(ν∘μ))
//   orthogonal: F(ν)F(μ) = d^loops · F(ν∘μ), so the trace picks up the loop
//               factor times d^(Brauer cycles of the composite).
RationalMatrix gram_matrix(Group g, int k, long d, int max_k = -1);

// Builds basis + Gram + inverse. The basis operators are linearly
// independent (Gram invertible) whenever d ≥ k; below that the inversion
// throws SingularGramError. max_k = -1 means default_k_max(g).
WeingartenTable build_table(Group g, int k, long d, int max_k = -1);

// One Haar moment E[ Π_t <ψ_{a(t)}| U† O U |ψ_{a(t)}> ]. The assignment maps
// tensor slots to dataset states (rows of the inner-product matrix); repeated
// entries give power moments, distinct entries give mixed moments.
struct MomentSpec {
    std::vector<int> assignment;
    const InnerProducts* inner = nullptr;  // non-owning

    int k() const { return static_cast<int>(assignment.size()); }
    void validate(Group g) const;  // bounds; orthogonal path needs real states
};

// Fully rational path; requires inner->exact to be populated.
Rational exact_moment(const WeingartenTable& table, const MomentSpec& spec);
// Floating path for datasets whose inner products are irrational (the
// Weingarten weights themselves are still exact and converted at the end).
double exact_moment_numeric(const WeingartenTable& table, const MomentSpec& spec);

// Convenience overloads that build the table on the fly.
Rational exact_moment(Group g, long d, const MomentSpec& spec);
double exact_moment_numeric(Group g, long d, const MomentSpec& spec);

// Closed-form second moments E[C_i C_j] - E[C_i]E[C_j] as a function of the
// pairwise overlap w = Tr[rho_i rho_j] (means vanish, so this is the
// covariance):
//   unitary:     d/(d²-1) · (w - 1/d)
//   orthogonal:  2(d+1)/((d+2)(d-1)) · (w·(1 - 1/(d+1)) - 1/(d+1))
// These agree with the k=2 table contraction for every d; the unit tests pin
// that identity.
Rational exact_covariance(const Rational& overlap, long d, Group g);
double exact_covariance(double overlap, long d, Group g);

// Covariance between outputs measured with *different* observables from the
// class (traceless, O² = 1, Tr[O_i O_j] = 0 for i ≠ j): identically zero at
// second order. Kept as a named operation so callers exercise the branch
// rather than silently assuming it.
Rational cross_observable_covariance();

// --- table cache ------------------------------------------------------------
//
// Tables are pure functions of (group, k, d); building the big ones is the
// only expensive step, so they can be persisted. Entries are serialized as
// decimal strings of numerator/denominator to keep the cache exact and
// portable.

std::string table_filename(Group g, int k, long d);
void save_table(const WeingartenTable& table, const std::string& path);
WeingartenTable load_table(const std::string& path);

// Load from `cache_dir` if present, else build and persist. Empty cache_dir
// means "always build, never touch the filesystem".
WeingartenTable cached_table(Group g, int k, long d, const std::string& cache_dir,
                             int max_k = -1);

}  // namespace qgp::weingarten
