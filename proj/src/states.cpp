#include "qgp/states.hpp"

#include <bit>
#include <cmath>
#include <complex>

#include "qgp/errors.hpp"

namespace qgp {

void InnerProducts::validate(double tol) const {
    const int n = m();
    if (n == 0) throw Error("inner-product matrix is empty");
    if (g.cols() != n) throw Error("inner-product matrix is not square");
    for (int i = 0; i < n; ++i) {
        if (std::abs(g(i, i) - std::complex<double>(1.0, 0.0)) > tol)
            throw Error("inner-product matrix diagonal is not 1 at index " +
                        std::to_string(i));
        for (int j = 0; j < n; ++j) {
            if (std::abs(g(i, j) - std::conj(g(j, i))) > tol)
                throw Error("inner-product matrix is not Hermitian");
            if (std::abs(g(i, j)) > 1.0 + tol)
                throw Error("inner-product entry exceeds 1 (states not normalized?)");
            if (real_flag && std::abs(g(i, j).imag()) > tol)
                throw Error("inner-product matrix marked real has complex entries");
        }
    }
    if (exact) {
        if (exact->rows() != n || exact->cols() != n)
            throw Error("exact inner-product matrix has the wrong shape");
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (std::abs(to_double((*exact)(i, j)) - g(i, j).real()) > tol ||
                    std::abs(g(i, j).imag()) > tol)
                    throw Error("exact and floating inner products disagree");
    }
}

void PureState::validate(double tol) const {
    if (amplitudes.size() == 0) throw Error("state has no amplitudes");
    if (std::abs(amplitudes.norm() - 1.0) > tol)
        throw Error("state is not normalized");
    if (real_flag && amplitudes.imag().cwiseAbs().maxCoeff() > tol)
        throw Error("state marked real has complex amplitudes");
}

PureState random_state(long d, bool real, rng::Philox& rng) {
    PureState s;
    s.real_flag = real;
    s.amplitudes.resize(d);
    if (real) {
        for (long i = 0; i < d; ++i) s.amplitudes[i] = rng.next_normal();
    } else {
        for (long i = 0; i < d; ++i)
            s.amplitudes[i] = std::complex<double>(rng.next_normal(), rng.next_normal());
    }
    s.amplitudes.normalize();
    return s;
}

PauliObservable make_observable(const std::string& spec, weingarten::Group g) {
    if (spec.empty()) throw Error("observable string is empty");
    if (spec.size() > 62) throw Error("observable string too long (max 62 qubits)");
    PauliObservable o;
    o.spec = spec;
    o.diagonal_flag = true;
    bool all_identity = true;
    const int n = static_cast<int>(spec.size());
    for (int t = 0; t < n; ++t) {
        // spec[0] is qubit 1 = most significant bit of a basis index
        const std::uint64_t bit = 1ULL << (n - 1 - t);
        switch (spec[t]) {
            case 'I': break;
            case 'X':
                o.flip_mask |= bit;
                o.diagonal_flag = false;
                all_identity = false;
                break;
            case 'Y':
                if (g == weingarten::Group::orthogonal)
                    throw RealStatesRequiredError(
                        "Y factors are not allowed with the orthogonal group "
                        "(observable must be real)");
                o.flip_mask |= bit;
                o.phase_mask |= bit;
                ++o.y_count;
                o.diagonal_flag = false;
                all_identity = false;
                break;
            case 'Z':
                o.phase_mask |= bit;
                all_identity = false;
                break;
            default:
                throw Error(std::string("invalid observable character '") + spec[t] +
                            "' (expected I, X, Y or Z)");
        }
    }
    if (all_identity)
        throw Error("observable is the identity string; a traceless operator is required");
    return o;
}

double pauli_expectation(const PauliObservable& obs, const Eigen::VectorXcd& phi) {
    const long d = static_cast<long>(phi.size());
    if (d != obs.d())
        throw Error("state dimension does not match the observable's 2^n");
    if (obs.diagonal_flag) {
        double acc = 0.0;
        for (long x = 0; x < d; ++x) {
            const double p = std::norm(phi[x]);
            acc += (std::popcount(static_cast<std::uint64_t>(x) & obs.phase_mask) & 1)
                       ? -p
                       : p;
        }
        return acc;
    }
    // ⟨φ|O|φ⟩ = Σ_x conj(φ[x ⊕ flip]) · i^{y_count} · (-1)^{popcount(x & phase)} · φ[x].
    // O is Hermitian, so the sum is real; summing the real part directly also
    // halves the arithmetic.
    static const std::complex<double> i_pow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    const std::complex<double> phase0 = i_pow[obs.y_count % 4];
    double acc = 0.0;
    for (long x = 0; x < d; ++x) {
        const long y = x ^ static_cast<long>(obs.flip_mask);
        std::complex<double> term = std::conj(phi[y]) * phi[x] * phase0;
        if (std::popcount(static_cast<std::uint64_t>(x) & obs.phase_mask) & 1)
            term = -term;
        acc += term.real();
    }
    return acc;
}

std::string to_string(DatasetKind kind) {
    switch (kind) {
        case DatasetKind::computational: return "computational";
        case DatasetKind::ghz_pair: return "ghz_pair";
        case DatasetKind::epsilon_pair: return "epsilon_pair";
        case DatasetKind::orthonormal_basis: return "orthonormal_basis";
        case DatasetKind::haar_random: return "haar_random";
        case DatasetKind::clustered: return "clustered";
    }
    return "?";
}

DatasetKind dataset_kind_from_string(const std::string& name) {
    if (name == "computational") return DatasetKind::computational;
    if (name == "ghz_pair") return DatasetKind::ghz_pair;
    if (name == "epsilon_pair") return DatasetKind::epsilon_pair;
    if (name == "orthonormal_basis") return DatasetKind::orthonormal_basis;
    if (name == "haar_random") return DatasetKind::haar_random;
    if (name == "clustered") return DatasetKind::clustered;
    throw Error("unknown dataset kind '" + name + "'");
}

namespace {

PureState basis_state(long d, long index) {
    PureState s;
    s.real_flag = true;
    s.amplitudes = Eigen::VectorXcd::Zero(d);
    s.amplitudes[index] = 1.0;
    return s;
}

void fill_inner_products(Dataset& ds) {
    const int m = ds.m();
    ds.inner.g.resize(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            ds.inner.g(i, j) = ds.states[i].amplitudes.dot(ds.states[j].amplitudes);
    ds.inner.real_flag = true;
    for (const auto& s : ds.states) ds.inner.real_flag = ds.inner.real_flag && s.real_flag;
}

}  // namespace

Dataset make_dataset(DatasetKind kind, const DatasetParams& params, weingarten::Group g) {
    const long d = params.d;
    if (d < 1) throw Error("dataset dimension must be at least 1");
    const bool real_states = g == weingarten::Group::orthogonal;

    Dataset ds;
    ds.d = d;
    switch (kind) {
        case DatasetKind::computational:
        case DatasetKind::orthonormal_basis: {
            if (params.m < 1 || params.m > d)
                throw Error("orthonormal dataset needs 1 <= m <= d");
            for (int i = 0; i < params.m; ++i) {
                ds.states.push_back(basis_state(d, i));
                ds.labels.push_back("e" + std::to_string(i));
            }
            fill_inner_products(ds);
            ds.inner.exact = RationalMatrix::identity(params.m);
            break;
        }
        case DatasetKind::ghz_pair: {
            if (d < 2) throw Error("ghz_pair needs d >= 2");
            ds.states.push_back(basis_state(d, 0));
            PureState ghz;
            ghz.real_flag = true;
            ghz.amplitudes = Eigen::VectorXcd::Zero(d);
            ghz.amplitudes[0] = ghz.amplitudes[d - 1] = 1.0 / std::sqrt(2.0);
            ds.states.push_back(std::move(ghz));
            ds.labels = {"zeros", "ghz"};
            // The inner product 1/√2 is irrational, so there is no exact
            // matrix; the *overlap* 1/2 is still exact downstream.
            fill_inner_products(ds);
            break;
        }
        case DatasetKind::epsilon_pair: {
            if (d < 2) throw Error("epsilon_pair needs d >= 2");
            ds.states.push_back(basis_state(d, 0));
            PureState eps;
            eps.real_flag = true;
            eps.amplitudes = Eigen::VectorXcd::Zero(d);
            eps.amplitudes[0] = 1.0 / std::sqrt(static_cast<double>(d));
            eps.amplitudes[d - 1] = std::sqrt(1.0 - 1.0 / static_cast<double>(d));
            ds.states.push_back(std::move(eps));
            ds.labels = {"zeros", "epsilon"};
            fill_inner_products(ds);
            break;
        }
        case DatasetKind::haar_random: {
            if (params.m < 1) throw Error("haar_random needs m >= 1");
            // High bit keeps dataset streams disjoint from per-sample streams,
            // which use plain sample indices.
            rng::Philox prng(params.seed, /*stream=*/(1ULL << 63) | 0x5441ULL);
            for (int i = 0; i < params.m; ++i) {
                ds.states.push_back(random_state(d, real_states, prng));
                ds.labels.push_back("haar" + std::to_string(i));
            }
            fill_inner_products(ds);
            break;
        }
        case DatasetKind::clustered: {
            if (params.classes < 1) throw Error("clustered needs classes >= 1");
            if (params.m < params.classes)
                throw Error("clustered needs m >= classes");
            if (d < params.classes)
                throw Error("clustered needs d >= classes for separated centers");
            if (params.spread < 0.0 || params.spread > 1.0)
                throw Error("clustered spread must lie in [0, 1]");
            rng::Philox prng(params.seed, /*stream=*/(1ULL << 63) | 0x434CULL);
            // Exactly orthogonal class centers: random states, Gram-Schmidt.
            std::vector<Eigen::VectorXcd> centers;
            for (int c = 0; c < params.classes; ++c) {
                Eigen::VectorXcd v = random_state(d, real_states, prng).amplitudes;
                for (const auto& u : centers) v -= u.dot(v) * u;
                const double nrm = v.norm();
                if (nrm < 1e-8) throw Error("clustered center collapsed; increase d");
                centers.push_back(v / nrm);
            }
            for (int i = 0; i < params.m; ++i) {
                const int c = i % params.classes;
                Eigen::VectorXcd v =
                    centers[c] + params.spread * random_state(d, real_states, prng).amplitudes;
                PureState s;
                s.real_flag = real_states;
                s.amplitudes = v / v.norm();
                ds.states.push_back(std::move(s));
                ds.labels.push_back("class" + std::to_string(c) + "_" +
                                    std::to_string(i / params.classes));
            }
            fill_inner_products(ds);
            break;
        }
    }
    for (const auto& s : ds.states) s.validate();
    ds.inner.validate();
    return ds;
}

}  // namespace qgp
