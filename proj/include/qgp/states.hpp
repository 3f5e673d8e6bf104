#pragma once

// Dataset states and measured observables. States are held as amplitude
// vectors; observables are Pauli strings, kept as bit masks so expectation
// values never materialize a d×d matrix.

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

#include "qgp/inner_products.hpp"
#include "qgp/rng.hpp"
#include "qgp/weingarten.hpp"

namespace qgp {

struct PureState {
    Eigen::VectorXcd amplitudes;
    bool real_flag = false;

    long d() const { return static_cast<long>(amplitudes.size()); }
    // Unit norm within tol; real_flag implies vanishing imaginary parts.
    void validate(double tol = 1e-12) const;
};

// |x|-normalized state with i.i.d. Gaussian amplitudes — one column of a Haar
// matrix, i.e. a Haar-random state (real amplitudes when `real` is set).
PureState random_state(long d, bool real, rng::Philox& rng);

// Pauli string O = P_1 ⊗ … ⊗ P_n on n qubits (d = 2^n), P_t ∈ {I,X,Y,Z};
// spec[0] acts on qubit 1, which owns the most significant bit of a basis
// index. Traceless (not all-identity) and squares to the identity, so the
// spectrum is ±1 and every expectation lands in [-1, 1].
//
// Action on a basis state: O|x⟩ = i^{y_count} · (-1)^{popcount(x & phase_mask)}
// · |x ⊕ flip_mask⟩, which is all the expectation paths need.
struct PauliObservable {
    std::string spec;
    std::uint64_t flip_mask = 0;   // bits under X or Y
    std::uint64_t phase_mask = 0;  // bits under Y or Z
    int y_count = 0;
    bool diagonal_flag = false;  // spec over {I,Z} only: O|x⟩ = ±|x⟩

    int n() const { return static_cast<int>(spec.size()); }
    long d() const { return 1L << n(); }
};

// Parses and validates a Pauli string. The all-identity string is rejected
// (the observable must be traceless), and Y is rejected for the orthogonal
// group, whose states and observables must stay real.
PauliObservable make_observable(const std::string& spec, weingarten::Group g);

// ⟨φ|O|φ⟩ in O(d): a signed sum of |amplitude|² for diagonal strings, an
// index-flip sum otherwise. Exact up to rounding; always real.
double pauli_expectation(const PauliObservable& obs, const Eigen::VectorXcd& phi);

struct Dataset {
    std::vector<PureState> states;
    std::vector<std::string> labels;
    InnerProducts inner;
    long d = 0;

    int m() const { return static_cast<int>(states.size()); }
};

// The dataset families exercised throughout:
//   computational      first m computational basis states (exactly orthonormal)
//   ghz_pair           e_0 and (e_0 + e_{d-1})/√2: overlap 1/2
//   epsilon_pair       e_0 and (1/√d)e_0 + √(1-1/d)e_{d-1}: overlap 1/d
//   orthonormal_basis  alias of computational (kept as a named kind)
//   haar_random        m i.i.d. Haar-random states
//   clustered          `classes` well-separated centers, members spread by a
//                      small perturbation: in-class overlap near 1,
//                      cross-class near 0
enum class DatasetKind {
    computational,
    ghz_pair,
    epsilon_pair,
    orthonormal_basis,
    haar_random,
    clustered,
};

std::string to_string(DatasetKind kind);
DatasetKind dataset_kind_from_string(const std::string& name);

struct DatasetParams {
    long d = 2;
    int m = 2;           // ignored by the pair kinds (always 2)
    int classes = 2;     // clustered only
    double spread = 0.1; // clustered only: perturbation amplitude
    std::uint64_t seed = 0;  // random kinds only
};

// Builds the states, their labels, and the inner-product matrix (with exact
// rational entries whenever the construction guarantees them). Random kinds
// draw real amplitudes when the orthogonal group is requested.
Dataset make_dataset(DatasetKind kind, const DatasetParams& params, weingarten::Group g);

}  // namespace qgp
