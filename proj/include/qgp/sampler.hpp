#pragma once

// Monte Carlo backend: Haar-random matrices, isometries, and batched
// computation of the network outputs C_i = ⟨ψ_i|U† O U|ψ_i⟩.
//
// The full-matrix samplers exist for small dimensions and as oracles. The
// production path never builds a d×d matrix: the dataset spans an
// r-dimensional subspace (r ≤ m), and U restricted to that span is a Haar
// d×r isometry, so one sample costs O(d·r²) instead of O(d²).

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

#include "qgp/rng.hpp"
#include "qgp/states.hpp"
#include "qgp/weingarten.hpp"

namespace qgp::sampler {

using weingarten::Group;

// Haar-distributed dense matrix: Ginibre followed by a Householder QR and
// the mandatory R-diagonal correction (multiply column j by the phase/sign
// of R[j][j]; without it the QR convention biases the distribution).
Eigen::MatrixXcd haar_unitary(long d, rng::Philox& rng);
Eigen::MatrixXd haar_orthogonal(long d, rng::Philox& rng);

// d×r matrix distributed as the first r columns of a Haar element: Ginibre
// block + modified Gram-Schmidt with a re-orthogonalization pass (MGS
// normalization makes the implicit R-diagonal positive, so no correction is
// needed here).
Eigen::MatrixXcd haar_isometry_complex(long d, int r, rng::Philox& rng);
Eigen::MatrixXd haar_isometry_real(long d, int r, rng::Philox& rng);

struct SampleBatch {
    Eigen::MatrixXd values;  // n_samples × m, one column per labeled output
    Group group = Group::unitary;
    long d = 0;
    std::uint64_t seed = 0;
    std::vector<std::string> state_labels;
    std::string observable;

    long n_samples() const { return static_cast<long>(values.rows()); }
    int m() const { return static_cast<int>(values.cols()); }
};

struct SampleOptions {
    long n_samples = 10000;  // mirrors the reference figures' sample count
    std::uint64_t seed = 0;
    int threads = 1;  // 0 = hardware concurrency
    // Refuse runs whose resident footprint (output matrix + per-thread
    // isometry workspace) would exceed this.
    std::uint64_t memory_limit_bytes = 2ULL << 30;
};

// One row per Haar draw, one column per dataset state; the same draw is used
// across all states of a row, so cross-state correlations survive. Sample s
// is generated from its own counter stream s of the seed, which makes rows
// a pure function of (build, seed, s) — thread count cannot change them.
SampleBatch sample_outputs(const Dataset& ds, const PauliObservable& obs, Group g,
                           const SampleOptions& opts);

// Parameter-shift gradient samples for the unitary gate model. The circuit
// inserts a rotation exp(-iθG/2) before the measurement; at the shift points
// θ = ±π/2 the two outputs C± are evaluated on the same Haar draw, and
// ∂θC = C⁺ - C⁻. G is a single-qubit Pauli chosen to anticommute with the
// observable's factor on the first non-identity qubit.
// Columns: {grad, plus, minus} (the difference and both shifted outputs).
SampleBatch parameter_shift_gradient_samples(const PureState& state,
                                             const PauliObservable& obs, Group g,
                                             const SampleOptions& opts);

}  // namespace qgp::sampler
