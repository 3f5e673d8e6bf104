#pragma once

// Dense-matrix oracles for the combinatorial kernels. Everything here builds
// the literal d^k-dimensional operators and evaluates traces numerically, so
// the production formulas (characters, loop counts, pair contractions) can be
// checked against brute force at small k and d.

#include <Eigen/Dense>

#include <complex>
#include <vector>

#include "qgp/brauer.hpp"
#include "qgp/perm.hpp"
#include "qgp/rng.hpp"
#include "qgp/states.hpp"

namespace qgp::testing {

inline long dense_dim(long d, int k) {
    long n = 1;
    for (int i = 0; i < k; ++i) n *= d;
    return n;
}

// Digits of x in base d, slot 0 most significant (slot t of the tensor
// product owns digit t).
inline std::vector<long> digits(long x, long d, int k) {
    std::vector<long> out(static_cast<size_t>(k));
    for (int t = k - 1; t >= 0; --t) {
        out[static_cast<size_t>(t)] = x % d;
        x /= d;
    }
    return out;
}

inline long undigits(const std::vector<long>& idx, long d) {
    long x = 0;
    for (long i : idx) x = x * d + i;
    return x;
}

// P(σ)|i_1 … i_k⟩ = |i_{σ⁻¹(1)} … i_{σ⁻¹(k)}⟩, i.e. the operator moves the
// content of slot t to slot σ(t).
inline Eigen::MatrixXd perm_operator(const perm::Permutation& p, long d) {
    const int k = p.k();
    const long n = dense_dim(d, k);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (long x = 0; x < n; ++x) {
        const auto in = digits(x, d, k);
        std::vector<long> out(static_cast<size_t>(k));
        for (int t = 0; t < k; ++t)
            out[static_cast<size_t>(p.image[static_cast<size_t>(t)])] =
                in[static_cast<size_t>(t)];
        m(undigits(out, d), x) = 1.0;
    }
    return m;
}

// ⟨j|F(s)|i⟩ = Π_{pairs {p,q}} δ(value_p, value_q), with bottom point t
// carrying ket index i_t and top point k+t carrying bra index j_t.
inline Eigen::MatrixXd brauer_operator(const brauer::PairPartition& s, long d) {
    const int k = s.k();
    const long n = dense_dim(d, k);
    const auto pairs = s.pairs();
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (long col = 0; col < n; ++col) {
        const auto in = digits(col, d, k);
        for (long row = 0; row < n; ++row) {
            const auto out = digits(row, d, k);
            auto value = [&](int point) {
                return point < k ? in[static_cast<size_t>(point)]
                                 : out[static_cast<size_t>(point - k)];
            };
            bool match = true;
            for (const auto& [p, q] : pairs)
                if (value(p) != value(q)) {
                    match = false;
                    break;
                }
            if (match) m(row, col) = 1.0;
        }
    }
    return m;
}

inline Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

inline Eigen::MatrixXcd kron_power(const Eigen::MatrixXcd& o, int k) {
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
    for (int t = 0; t < k; ++t) out = kron(out, o);
    return out;
}

// Λ = ⊗_t |ψ_{a(t)}⟩⟨ψ_{a(t)}| in slot order.
inline Eigen::MatrixXcd lambda_operator(const std::vector<Eigen::VectorXcd>& states,
                                        const std::vector<int>& assignment) {
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
    for (int a : assignment) {
        const auto& psi = states[static_cast<size_t>(a)];
        out = kron(out, psi * psi.adjoint());
    }
    return out;
}

// Dense Pauli string matching the PauliObservable conventions (spec[0] acts
// on the most significant qubit).
inline Eigen::MatrixXcd pauli_dense(const std::string& spec) {
    using cd = std::complex<double>;
    Eigen::Matrix2cd i2 = Eigen::Matrix2cd::Identity();
    Eigen::Matrix2cd x, y, z;
    x << 0, 1, 1, 0;
    y << cd(0, 0), cd(0, -1), cd(0, 1), cd(0, 0);
    z << 1, 0, 0, -1;
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
    for (char c : spec) {
        const Eigen::Matrix2cd& f = c == 'X' ? x : c == 'Y' ? y : c == 'Z' ? z : i2;
        out = kron(out, f);
    }
    return out;
}

inline Eigen::VectorXcd random_complex_state(long d, rng::Philox& prng) {
    Eigen::VectorXcd v(d);
    for (long i = 0; i < d; ++i)
        v(i) = std::complex<double>(prng.next_normal(), prng.next_normal());
    return v / v.norm();
}

inline Eigen::VectorXcd random_real_state(long d, rng::Philox& prng) {
    Eigen::VectorXd v(d);
    for (long i = 0; i < d; ++i) v(i) = prng.next_normal();
    v /= v.norm();
    return v.cast<std::complex<double>>();
}

// Inner-product matrix ⟨ψ_i|ψ_j⟩ of a list of state vectors.
inline Eigen::MatrixXcd gram_of(const std::vector<Eigen::VectorXcd>& states) {
    const int m = static_cast<int>(states.size());
    Eigen::MatrixXcd g(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            g(i, j) = states[static_cast<size_t>(i)].dot(states[static_cast<size_t>(j)]);
    return g;
}

}  // namespace qgp::testing
