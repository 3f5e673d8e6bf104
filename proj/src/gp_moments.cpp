#include "qgp/gp_moments.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "qgp/errors.hpp"
#include "qgp/perm.hpp"

namespace qgp::gp {

std::string to_string(CovMode mode) {
    switch (mode) {
        case CovMode::exact: return "exact";
        case CovMode::asymptotic: return "asymptotic";
        case CovMode::asymptotic_uncorrelated: return "asymptotic-uncorrelated";
        case CovMode::asymptotic_orthogonal: return "asymptotic-orthogonal";
    }
    return "?";
}

CovMode cov_mode_from_string(const std::string& name) {
    if (name == "exact") return CovMode::exact;
    if (name == "asymptotic") return CovMode::asymptotic;
    if (name == "asymptotic-uncorrelated") return CovMode::asymptotic_uncorrelated;
    if (name == "asymptotic-orthogonal") return CovMode::asymptotic_orthogonal;
    throw Error("unknown covariance mode '" + name + "'");
}

double regime_threshold(long d) {
    if (d < 2) return 1.0;
    const double l = std::log2(static_cast<double>(d));
    return 1.0 / (l * l);
}

namespace {

void check_assignment(const std::vector<int>& assignment, int m) {
    for (int s : assignment)
        if (s < 0 || s >= m)
            throw Error("slot assignment references state " + std::to_string(s) +
                        " outside the dataset (m = " + std::to_string(m) + ")");
}

// Σ over perfect pairings p of Π over pairs (t, p(t)) of entry(a_t, a_{p(t)}).
double pairing_sum(const Eigen::MatrixXd& entry, const std::vector<int>& assignment) {
    const int k = static_cast<int>(assignment.size());
    if (k % 2 != 0) return 0.0;
    double total = 0.0;
    for (const auto& p : perm::enumerate_pairings(k)) {
        double prod = 1.0;
        for (int t = 0; t < k; ++t) {
            const int u = p.image[t];
            if (t < u) prod *= entry(assignment[t], assignment[u]);
        }
        total += prod;
    }
    return total;
}

}  // namespace

double asymptotic_moment_pairings(const Eigen::MatrixXd& overlaps,
                                  const std::vector<int>& assignment, long d, Group g) {
    check_assignment(assignment, static_cast<int>(overlaps.rows()));
    const int k = static_cast<int>(assignment.size());
    if (k % 2 != 0) return 0.0;
    const double scale =
        (g == Group::orthogonal ? std::pow(2.0, k / 2) : 1.0) /
        std::pow(static_cast<double>(d), k / 2);
    return scale * pairing_sum(overlaps, assignment);
}

double isserlis_moment(const Eigen::MatrixXd& cov, const std::vector<int>& assignment) {
    check_assignment(assignment, static_cast<int>(cov.rows()));
    return pairing_sum(cov, assignment);
}

double isserlis_moment(const CovarianceMatrix& cov, const std::vector<int>& assignment) {
    return isserlis_moment(cov.entries, assignment);
}

namespace {

std::string worst_pair_note(const Eigen::MatrixXd& w, int i, int j, const char* what) {
    std::ostringstream ss;
    ss << what << " (worst pair " << i << "," << j << " with overlap " << w(i, j) << ")";
    return ss.str();
}

void add_regime_warnings(CovarianceMatrix& cov, const Eigen::MatrixXd& w, long d,
                         CovMode mode) {
    const int m = static_cast<int>(w.rows());
    if (m < 2) return;
    const double thr = regime_threshold(d);
    int wi = 0, wj = 1;
    switch (mode) {
        case CovMode::exact:
            return;
        case CovMode::asymptotic: {
            // Regime: every overlap of order one (≥ 1/polylog d).
            double lo = 2.0;
            for (int i = 0; i < m; ++i)
                for (int j = i + 1; j < m; ++j)
                    if (w(i, j) < lo) { lo = w(i, j); wi = i; wj = j; }
            if (lo < thr)
                cov.warnings.push_back(worst_pair_note(
                    w, wi, wj,
                    "dataset has overlaps below the order-one regime of this "
                    "asymptotic form"));
            return;
        }
        case CovMode::asymptotic_uncorrelated: {
            // Regime: overlaps at the Haar-typical value 1/d. The statement
            // gives no constant; flag deviations beyond a factor of two.
            const double target = 1.0 / static_cast<double>(d);
            double worst = 0.0;
            for (int i = 0; i < m; ++i)
                for (int j = i + 1; j < m; ++j) {
                    const double dev = std::abs(w(i, j) - target);
                    if (dev > worst) { worst = dev; wi = i; wj = j; }
                }
            if (worst > target)
                cov.warnings.push_back(worst_pair_note(
                    w, wi, wj,
                    "dataset overlaps deviate from 1/d by more than a factor "
                    "of two; uncorrelated form may not apply"));
            return;
        }
        case CovMode::asymptotic_orthogonal: {
            // Regime: exactly orthogonal states.
            double hi = -1.0;
            for (int i = 0; i < m; ++i)
                for (int j = i + 1; j < m; ++j)
                    if (w(i, j) > hi) { hi = w(i, j); wi = i; wj = j; }
            if (hi > 1e-12)
                cov.warnings.push_back(worst_pair_note(
                    w, wi, wj,
                    "states are not mutually orthogonal; the orthogonal-dataset "
                    "form may not apply"));
            return;
        }
    }
}

}  // namespace

CovarianceMatrix covariance_matrix(const InnerProducts& inner, long d, Group g,
                                   CovMode mode) {
    const int m = inner.m();
    const Eigen::MatrixXd w = inner.overlaps();
    const double dd = static_cast<double>(d);
    const double gf = g == Group::orthogonal ? 2.0 : 1.0;  // doubled real-case variance

    CovarianceMatrix cov;
    cov.provenance = mode;
    cov.entries.resize(m, m);
    switch (mode) {
        case CovMode::exact:
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j)
                    cov.entries(i, j) = weingarten::exact_covariance(w(i, j), d, g);
            break;
        case CovMode::asymptotic:
            cov.entries = gf * w / dd;
            break;
        case CovMode::asymptotic_uncorrelated:
            cov.entries.setZero();
            cov.entries.diagonal().setConstant(gf / dd);
            break;
        case CovMode::asymptotic_orthogonal: {
            const double diag = g == Group::unitary ? 1.0 / (dd + 1.0) : 2.0 / (dd + 1.0);
            const double off = g == Group::unitary
                                   ? -1.0 / (dd * dd - 1.0)
                                   : -1.0 / ((dd + 2.0) * (dd - 1.0));
            cov.entries.setConstant(off);
            cov.entries.diagonal().setConstant(diag);
            break;
        }
    }
    add_regime_warnings(cov, w, d, mode);
    return cov;
}

PsdReport check_psd(const Eigen::MatrixXd& cov, double tol) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov, Eigen::EigenvaluesOnly);
    PsdReport r;
    r.min_eigenvalue = es.eigenvalues().minCoeff();
    r.psd = r.min_eigenvalue >= -tol;
    return r;
}

namespace {

// (k-1)!! = k!/(2^(k/2) (k/2)!), the number of perfect pairings of k slots.
double double_factorial_odd(int k) {
    double v = 1.0;
    for (int j = k - 1; j >= 1; j -= 2) v *= j;
    return v;
}

}  // namespace

double orthogonal_states_moment(int k, long d, Group g, SignMode mode) {
    if (k <= 0) throw Error("moment order must be at least 1");
    if (k % 2 != 0) return 0.0;
    const double dd = static_cast<double>(d);
    const double pairings = double_factorial_odd(k);
    if (mode == SignMode::literal) {
        const double group_factor = g == Group::orthogonal ? std::pow(2.0, k / 2) : 1.0;
        return group_factor * pairings / std::pow(dd, k);
    }
    const double off = g == Group::unitary ? -1.0 / (dd * dd - 1.0)
                                           : -1.0 / ((dd + 2.0) * (dd - 1.0));
    return pairings * std::pow(off, k / 2);
}

RepeatedStatesMoment repeated_states_moment(const std::vector<int>& multiplicities, long d,
                                            Group g) {
    if (multiplicities.empty()) throw Error("repeated_states_moment: no multiplicities");
    for (int kb : multiplicities)
        if (kb < 1) throw Error("multiplicities must be positive");
    const int q = static_cast<int>(multiplicities.size());
    const int k = std::accumulate(multiplicities.begin(), multiplicities.end(), 0);
    const double dd = static_cast<double>(d);

    RepeatedStatesMoment out;

    // Ground truth: Gaussian moment over the exact covariance of q mutually
    // orthogonal states (overlap 1 on the diagonal, 0 off it).
    Eigen::MatrixXd cov(q, q);
    const double var = weingarten::exact_covariance(1.0, d, g);
    const double off = weingarten::exact_covariance(0.0, d, g);
    cov.setConstant(off);
    cov.diagonal().setConstant(var);
    std::vector<int> assignment;
    assignment.reserve(k);
    for (int b = 0; b < q; ++b)
        assignment.insert(assignment.end(), multiplicities[b], b);
    out.isserlis = isserlis_moment(cov, assignment);

    // Displayed closed form: prefactor d^R/d^k with R summing ⌊k_β/2⌋ over
    // classes of multiplicity ≥ 2, times the per-class self-pairing counts
    // (odd classes get the extra k_β ways to place the unpaired copy);
    // orthogonal group 2^R larger. Requires some class with k_β ≥ 2.
    int r_exp = 0;
    for (int kb : multiplicities)
        if (kb >= 2) r_exp += kb / 2;
    out.literal_assumption_holds = r_exp > 0;
    if (out.literal_assumption_holds) {
        double sum = 0.0;
        for (int kb : multiplicities) {
            const int h = kb / 2;
            const double self_pairings = double_factorial_odd(2 * h);  // (2h-1)!!
            sum += (kb % 2 == 1) ? kb * self_pairings : self_pairings;
        }
        const double group_factor = g == Group::orthogonal ? std::pow(2.0, r_exp) : 1.0;
        out.literal = group_factor * sum * std::pow(dd, r_exp) / std::pow(dd, k);
    } else {
        // All multiplicities 1: fall back to the all-distinct closed form.
        out.literal = orthogonal_states_moment(k, d, g, SignMode::literal);
    }
    return out;
}

double dataset_average_overlap(const Eigen::MatrixXd& overlaps) {
    const int m = static_cast<int>(overlaps.rows());
    if (m < 2) throw Error("dataset_average_overlap needs at least two states");
    double sum = 0.0;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            if (i != j) sum += overlaps(i, j);
    return sum / (static_cast<double>(m) * (m - 1));
}

}  // namespace qgp::gp
