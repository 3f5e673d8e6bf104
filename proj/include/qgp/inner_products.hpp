#pragma once

#include <Eigen/Dense>

#include <optional>

#include "qgp/rational.hpp"

namespace qgp {

// m x m matrix of state inner products <psi_i|psi_j>. This is the only piece
// of dataset information any moment formula needs: every trace of a product
// of pure states reduces to a product of these entries.
struct InnerProducts {
    Eigen::MatrixXcd g;
    bool real_flag = false;

    // Exact entries, populated when the dataset is built from closed forms
    // whose inner products are rational (orthonormal bases, computational
    // states). Their presence enables the fully rational moment path.
    std::optional<RationalMatrix> exact;

    int m() const { return static_cast<int>(g.rows()); }

    // Pairwise Tr[rho_i rho_j] = |<psi_i|psi_j>|^2.
    Eigen::MatrixXd overlaps() const {
        return g.cwiseAbs2();
    }

    // Hermitian, unit diagonal, entries bounded by 1 (Cauchy-Schwarz).
    void validate(double tol = 1e-10) const;
};

}  // namespace qgp
