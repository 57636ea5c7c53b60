#ifndef QOC_ROTOR_HPP
#define QOC_ROTOR_HPP

#include <Eigen/Dense>

#include "qoc/coupling.hpp"

namespace qoc {

/// Molecular constants of a linear rigid rotor in a linearly polarized field.
/// B is given in cm^-1 and converted internally; everything else is in a.u.
struct RotorParams {
    double b_cm1 = 1.9313;
    double mu0 = 0.044;
    double alpha_par = 15.65;
    double alpha_perp = 11.73;
    double beta_par = 28.35;
    double beta_perp = 6.64;

    double b_au() const;
    /// Full rephasing time pi/B of the B j(j+1) spectrum.
    double rotational_period() const;
    void validate() const;
};

/// Truncated |j,m> basis (fixed m, j = |m|..j_max) with the angular operator
/// matrices and the field-coupling operators mu, alpha, beta.
struct RotorSystem {
    RotorParams params;
    int j_max = 8;
    int m = 0;
    Eigen::MatrixXd h0;  // diagonal B j(j+1)
    Eigen::MatrixXd c1;  // cos(theta)
    Eigen::MatrixXd c2;  // cos^2(theta), boundary-exact
    Eigen::MatrixXd c3;  // cos^3(theta), boundary-exact
    Eigen::MatrixXd mu_op;
    Eigen::MatrixXd alpha_op;
    Eigen::MatrixXd beta_op;

    int dim() const { return j_max - std::abs(m) + 1; }
    CouplingOps coupling() const { return CouplingOps{h0, mu_op, alpha_op, beta_op}; }
};

/// Eigenvector of cos(theta) with the highest eigenvalue on the j <= j_opt
/// subspace, zero-padded to the propagation basis.
struct TargetState {
    int j_opt = 4;
    Eigen::VectorXcd vector;
    double eigenvalue = 0.0;
};

/// <j',m|cos(theta)|j,m> on j = |m|..j_max. Tridiagonal, real symmetric.
Eigen::MatrixXd cos_theta_matrix(int j_max, int m);

/// Exact matrix elements of cos^2 and cos^3 over the retained basis,
/// obtained from powers of cos(theta) on an extended basis (j_max + 3).
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> cos_power_matrices(int j_max, int m);

RotorSystem build_rotor_system(const RotorParams& params, int j_max, int m);

/// H(E) = H0 - E mu - E^2 alpha - E^3 beta.
Eigen::MatrixXd hamiltonian(const RotorSystem& system, double field);

TargetState build_target(int j_opt, int m, int basis_dim);

}  // namespace qoc

#endif
