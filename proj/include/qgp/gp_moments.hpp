#pragma once

// Large-d Gaussian-process layer. The exact engine (weingarten.hpp) is the
// arbiter; this module provides the limits it converges to: pairing-sum
// moments, the three covariance-matrix regimes (overlaps of order one,
// overlaps 1/d, exactly orthogonal states), Gaussian moments via Isserlis,
// and the closed forms for repeated and mutually orthogonal states.

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "qgp/inner_products.hpp"
#include "qgp/weingarten.hpp"

namespace qgp::gp {

using weingarten::Group;

// Which formula produced a covariance matrix. exact holds at every d;
// the three asymptotic forms are the large-d limits for their regimes.
enum class CovMode { exact, asymptotic, asymptotic_uncorrelated, asymptotic_orthogonal };

std::string to_string(CovMode mode);
CovMode cov_mode_from_string(const std::string& name);

struct CovarianceMatrix {
    Eigen::MatrixXd entries;
    CovMode provenance = CovMode::exact;
    // Advisory regime notes (e.g. "asymptotic form requested but the dataset
    // overlaps are outside its regime"). Never fatal.
    std::vector<std::string> warnings;

    int m() const { return static_cast<int>(entries.rows()); }
};

// Overlap scale below which a dataset no longer counts as "overlaps of order
// one" for regime warnings: 1/log2(d)^2. Advisory only.
double regime_threshold(long d);

// Leading-order moment E[C_{a(0)} ··· C_{a(k-1)}]: sum over perfect pairings
// of slots, each pair (t,t') contributing the overlap Tr[rho_{a(t)}
// rho_{a(t')}], scaled by 1/d^(k/2); the doubled orthogonal-group covariance
// turns into an overall 2^(k/2). Odd k gives exactly 0.
double asymptotic_moment_pairings(const Eigen::MatrixXd& overlaps,
                                  const std::vector<int>& assignment, long d, Group g);

// Moment of a zero-mean Gaussian vector: sum over pairings of products of
// covariance entries. With cov = overlaps/d this reproduces
// asymptotic_moment_pairings, which is the whole point: matching the two is
// what makes the process Gaussian.
double isserlis_moment(const Eigen::MatrixXd& cov, const std::vector<int>& assignment);
double isserlis_moment(const CovarianceMatrix& cov, const std::vector<int>& assignment);

// The m×m covariance matrix of the dataset outputs in the requested mode.
//   exact:                   second-moment closed form at every (overlap, d)
//   asymptotic:              overlaps/d (orthogonal group: 2×), overlaps of
//                            order 1
//   asymptotic_uncorrelated: diag 1/d (2/d), zero off-diagonal, overlaps near
//                            1/d
//   asymptotic_orthogonal:   diag 1/(d+1) (2/(d+1)), off-diagonal -1/(d²-1)
//                            (-1/((d+2)(d-1))), mutually orthogonal states
// Regime mismatches produce warnings, never errors.
CovarianceMatrix covariance_matrix(const InnerProducts& inner, long d, Group g,
                                   CovMode mode);

// Smallest eigenvalue of a symmetric matrix vs a tolerance. The asymptotic
// forms can dip slightly below zero (the orthogonal-dataset form is PSD only
// up to O(1/d²)), so callers report this rather than enforce it.
struct PsdReport {
    bool psd = true;
    double min_eigenvalue = 0.0;
};
PsdReport check_psd(const Eigen::MatrixXd& cov, double tol = 1e-10);

// k-th joint moment of k outputs on *distinct, mutually orthogonal* states.
// The two sign conventions disagree: the Gaussian route pairs distinct states
// through the negative off-diagonal covariance and picks up (-1)^(k/2), while
// the positive closed form |T_k|/d^k drops that sign. The exact engine sides
// with the Gaussian route, so isserlis is the default.
enum class SignMode { isserlis, literal };
double orthogonal_states_moment(int k, long d, Group g,
                                SignMode mode = SignMode::isserlis);

// Joint moment when the slots hold repeated copies of mutually orthogonal
// states: multiplicities (k_1, ..., k_q), k = Σ k_β.
struct RepeatedStatesMoment {
    // Gaussian moment over the exact second-moment covariance of the q
    // states; the value everything else is compared against.
    double isserlis = 0.0;
    // The displayed leading-order closed form d^R/d^k · Σ_β (per-class
    // self-pairing counts), R = Σ_{k_β ≥ 2} ⌊k_β/2⌋; orthogonal group 2^R
    // larger. Only stated under literal_assumption_holds.
    double literal = 0.0;
    // The closed form assumes some k_β ≥ 2; when all multiplicities are 1 the
    // literal field falls back to the all-distinct closed form |T_k|/d^k.
    bool literal_assumption_holds = false;
};
RepeatedStatesMoment repeated_states_moment(const std::vector<int>& multiplicities, long d,
                                            Group g);

// Mean off-diagonal overlap; classifies datasets whose per-pair overlaps
// vary into the regimes above "on average".
double dataset_average_overlap(const Eigen::MatrixXd& overlaps);

}  // namespace qgp::gp
