#include "qgp/sampler.hpp"

#include <atomic>
#include <bit>
#include <cmath>
#include <complex>
#include <thread>

#include "qgp/errors.hpp"

namespace qgp::sampler {

namespace {

void fill_ginibre(Eigen::MatrixXd& m, rng::Philox& rng) {
    double* p = m.data();
    const long n = static_cast<long>(m.size());
    for (long i = 0; i < n; ++i) p[i] = rng.next_normal();
}

void fill_ginibre(Eigen::MatrixXcd& m, rng::Philox& rng) {
    std::complex<double>* p = m.data();
    const long n = static_cast<long>(m.size());
    for (long i = 0; i < n; ++i) {
        const double re = rng.next_normal();
        const double im = rng.next_normal();
        p[i] = std::complex<double>(re, im);
    }
}

// Modified Gram-Schmidt with one re-orthogonalization pass. Ginibre columns
// are almost surely independent, so no rank handling is needed; the second
// pass pushes orthogonality to machine precision even at large d.
template <class Mat>
void mgs_in_place(Mat& a) {
    const int r = static_cast<int>(a.cols());
    for (int j = 0; j < r; ++j) {
        for (int pass = 0; pass < 2; ++pass)
            for (int i = 0; i < j; ++i)
                a.col(j) -= a.col(i).dot(a.col(j)) * a.col(i);
        const double nrm = a.col(j).norm();
        if (nrm == 0.0) throw Error("degenerate Ginibre column during orthonormalization");
        a.col(j) /= nrm;
    }
}

template <class Mat>
Mat haar_full(long d, rng::Philox& rng) {
    if (d < 1) throw Error("dimension must be at least 1");
    Mat g(d, d);
    fill_ginibre(g, rng);
    Eigen::HouseholderQR<Mat> qr(g);
    Mat q = qr.householderQ() * Mat::Identity(d, d);
    // Fix the QR gauge: scale column j by the phase (sign) of R[j][j] so the
    // implicit R has positive diagonal. This is what makes Q exactly Haar.
    for (long j = 0; j < d; ++j) {
        const auto rjj = qr.matrixQR()(j, j);
        const double mag = std::abs(rjj);
        if (mag == 0.0) throw Error("singular Ginibre matrix (zero R diagonal)");
        q.col(j) *= rjj / mag;
    }
    return q;
}

template <class Mat>
Mat haar_isometry_impl(long d, int r, rng::Philox& rng) {
    if (r < 1 || r > d) throw Error("isometry needs 1 <= r <= d");
    Mat g(d, r);
    fill_ginibre(g, rng);
    mgs_in_place(g);
    return g;
}

}  // namespace

Eigen::MatrixXcd haar_unitary(long d, rng::Philox& rng) {
    return haar_full<Eigen::MatrixXcd>(d, rng);
}

Eigen::MatrixXd haar_orthogonal(long d, rng::Philox& rng) {
    return haar_full<Eigen::MatrixXd>(d, rng);
}

Eigen::MatrixXcd haar_isometry_complex(long d, int r, rng::Philox& rng) {
    return haar_isometry_impl<Eigen::MatrixXcd>(d, r, rng);
}

Eigen::MatrixXd haar_isometry_real(long d, int r, rng::Philox& rng) {
    return haar_isometry_impl<Eigen::MatrixXd>(d, r, rng);
}

namespace {

// Orthonormal basis of the span of the dataset states (columns), plus each
// state's coordinates in that basis. Near-dependent states collapse into the
// existing basis instead of adding a dimension.
template <class Mat>
void span_basis(const std::vector<PureState>& states, Mat& basis, Mat& coords) {
    const long d = states[0].d();
    const int m = static_cast<int>(states.size());
    Mat b(d, m);
    int r = 0;
    for (int i = 0; i < m; ++i) {
        typename Mat::ColXpr dst = b.col(r);
        if constexpr (std::is_same_v<Mat, Eigen::MatrixXd>)
            dst = states[i].amplitudes.real();
        else
            dst = states[i].amplitudes;
        for (int pass = 0; pass < 2; ++pass)
            for (int j = 0; j < r; ++j) dst -= b.col(j).dot(dst) * b.col(j);
        const double nrm = dst.norm();
        if (nrm > 1e-10) {
            dst /= nrm;
            ++r;
        }
    }
    basis = b.leftCols(r);
    coords.resize(r, m);
    for (int i = 0; i < m; ++i) {
        if constexpr (std::is_same_v<Mat, Eigen::MatrixXd>)
            coords.col(i) = basis.adjoint() * states[i].amplitudes.real();
        else
            coords.col(i) = basis.adjoint() * states[i].amplitudes;
    }
}

void check_memory(std::uint64_t bytes, std::uint64_t limit) {
    if (bytes > limit)
        throw CapacityError("sampling run needs about " + std::to_string(bytes >> 20) +
                            " MiB, above the limit of " + std::to_string(limit >> 20) +
                            " MiB; lower n_samples or raise memory_limit_bytes");
}

int resolve_threads(int threads) {
    if (threads > 0) return threads;
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

// Fixed-size work units keep the schedule simple; rows are a pure function
// of (seed, sample index), so the partition does not affect the output.
constexpr long kBlock = 512;

template <class Fn>
void run_blocks(long n, int threads, Fn&& per_sample) {
    const long blocks = (n + kBlock - 1) / kBlock;
    if (threads <= 1) {
        for (long s = 0; s < n; ++s) per_sample(s);
        return;
    }
    std::atomic<long> next{0};
    auto worker = [&] {
        for (;;) {
            const long blk = next.fetch_add(1);
            if (blk >= blocks) return;
            const long end = std::min(n, (blk + 1) * kBlock);
            for (long s = blk * kBlock; s < end; ++s) per_sample(s);
        }
    };
    std::vector<std::thread> pool;
    const int tcount = static_cast<int>(std::min<long>(threads, blocks));
    pool.reserve(tcount);
    for (int t = 0; t < tcount; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

double expectation_real(const PauliObservable& obs, const Eigen::VectorXd& phi) {
    // Real-amplitude version of pauli_expectation (the orthogonal-group path
    // never sees Y factors, so the phase is ±1).
    const long d = static_cast<long>(phi.size());
    if (obs.diagonal_flag) {
        double acc = 0.0;
        for (long x = 0; x < d; ++x) {
            const double p = phi[x] * phi[x];
            acc += (std::popcount(static_cast<std::uint64_t>(x) & obs.phase_mask) & 1)
                       ? -p
                       : p;
        }
        return acc;
    }
    double acc = 0.0;
    for (long x = 0; x < d; ++x) {
        const long y = x ^ static_cast<long>(obs.flip_mask);
        const double term = phi[y] * phi[x];
        acc += (std::popcount(static_cast<std::uint64_t>(x) & obs.phase_mask) & 1)
                   ? -term
                   : term;
    }
    return acc;
}

}  // namespace

SampleBatch sample_outputs(const Dataset& ds, const PauliObservable& obs, Group g,
                           const SampleOptions& opts) {
    if (ds.m() == 0) throw Error("dataset is empty");
    if (obs.d() != ds.d)
        throw Error("observable acts on d = " + std::to_string(obs.d()) +
                    " but the dataset has d = " + std::to_string(ds.d));
    if (opts.n_samples < 1) throw Error("n_samples must be at least 1");
    const bool real_path = g == Group::orthogonal;
    if (real_path) {
        if (!ds.inner.real_flag)
            throw RealStatesRequiredError(
                "orthogonal-group sampling requires a real-amplitude dataset");
        if (obs.y_count > 0)
            throw RealStatesRequiredError(
                "orthogonal-group sampling requires a Y-free observable");
    }

    const long d = ds.d;
    const int m = ds.m();
    const long n = opts.n_samples;

    SampleBatch batch;
    batch.group = g;
    batch.d = d;
    batch.seed = opts.seed;
    batch.state_labels = ds.labels;
    batch.observable = obs.spec;

    const int threads = resolve_threads(opts.threads);
    // Shared: basis + coords; per thread: d×r isometry and a d-vector.
    const std::uint64_t scalar = real_path ? 8 : 16;

    if (real_path) {
        Eigen::MatrixXd basis, coords;
        span_basis<Eigen::MatrixXd>(ds.states, basis, coords);
        const int r = static_cast<int>(basis.cols());
        check_memory(static_cast<std::uint64_t>(n) * m * 8 +
                         static_cast<std::uint64_t>(threads) * scalar * d * (r + 1) +
                         scalar * d * (m + r),
                     opts.memory_limit_bytes);
        batch.values.resize(n, m);
        run_blocks(n, threads, [&](long s) {
            rng::Philox rng(opts.seed, static_cast<std::uint64_t>(s));
            const Eigen::MatrixXd v = haar_isometry_real(d, r, rng);
            Eigen::VectorXd phi(d);
            for (int i = 0; i < m; ++i) {
                phi.noalias() = v * coords.col(i);
                batch.values(s, i) = expectation_real(obs, phi);
            }
        });
    } else {
        Eigen::MatrixXcd basis, coords;
        span_basis<Eigen::MatrixXcd>(ds.states, basis, coords);
        const int r = static_cast<int>(basis.cols());
        check_memory(static_cast<std::uint64_t>(n) * m * 8 +
                         static_cast<std::uint64_t>(threads) * scalar * d * (r + 1) +
                         scalar * d * (m + r),
                     opts.memory_limit_bytes);
        batch.values.resize(n, m);
        run_blocks(n, threads, [&](long s) {
            rng::Philox rng(opts.seed, static_cast<std::uint64_t>(s));
            const Eigen::MatrixXcd v = haar_isometry_complex(d, r, rng);
            Eigen::VectorXcd phi(d);
            for (int i = 0; i < m; ++i) {
                phi.noalias() = v * coords.col(i);
                batch.values(s, i) = pauli_expectation(obs, phi);
            }
        });
    }
    return batch;
}

SampleBatch parameter_shift_gradient_samples(const PureState& state,
                                             const PauliObservable& obs, Group g,
                                             const SampleOptions& opts) {
    if (g == Group::orthogonal)
        throw Error(
            "parameter-shift gradients are defined for the unitary gate model only");
    if (obs.d() != state.d())
        throw Error("observable and state dimensions disagree");
    if (opts.n_samples < 1) throw Error("n_samples must be at least 1");
    state.validate();
    const long d = state.d();

    // Rotation generator: a single-qubit Pauli anticommuting with the
    // observable's factor on its first non-identity qubit, so the shifted
    // outputs actually move.
    const int n_qubits = obs.n();
    int target = -1;
    for (int t = 0; t < n_qubits && target < 0; ++t)
        if (obs.spec[t] != 'I') target = t;
    const bool gen_is_z = obs.spec[target] == 'X';
    const std::uint64_t gbit = 1ULL << (n_qubits - 1 - target);

    SampleBatch batch;
    batch.group = g;
    batch.d = d;
    batch.seed = opts.seed;
    batch.state_labels = {"grad", "plus", "minus"};
    batch.observable = obs.spec;
    const long n = opts.n_samples;
    check_memory(static_cast<std::uint64_t>(n) * 3 * 8 +
                     static_cast<std::uint64_t>(resolve_threads(opts.threads)) * 16 * d * 3,
                 opts.memory_limit_bytes);
    batch.values.resize(n, 3);

    const std::complex<double> mi(0.0, -1.0);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    run_blocks(n, resolve_threads(opts.threads), [&](long s) {
        // Disjoint stream namespace from sample_outputs under the same seed.
        rng::Philox rng(opts.seed, (1ULL << 62) | static_cast<std::uint64_t>(s));
        Eigen::VectorXcd phi(d), plus(d), minus(d);
        {
            // U|ψ⟩ for Haar U is itself a Haar-random state (left
            // invariance), so the evolved state is drawn directly.
            Eigen::MatrixXcd col(d, 1);
            fill_ginibre(col, rng);
            phi = col.col(0) / col.col(0).norm();
        }
        // exp(∓iπ/4 G)|φ⟩ = (|φ⟩ ∓ i G|φ⟩)/√2 for G² = 1
        for (long x = 0; x < d; ++x) {
            std::complex<double> gphi;
            if (gen_is_z)
                gphi = (static_cast<std::uint64_t>(x) & gbit) ? -phi[x] : phi[x];
            else
                gphi = phi[x ^ static_cast<long>(gbit)];
            plus[x] = (phi[x] + mi * gphi) * inv_sqrt2;
            minus[x] = (phi[x] - mi * gphi) * inv_sqrt2;
        }
        const double cp = pauli_expectation(obs, plus);
        const double cm = pauli_expectation(obs, minus);
        batch.values(s, 0) = cp - cm;
        batch.values(s, 1) = cp;
        batch.values(s, 2) = cm;
    });
    return batch;
}

}  // namespace qgp::sampler
