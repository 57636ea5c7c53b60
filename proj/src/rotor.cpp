#include "qoc/rotor.hpp"

#include <cmath>
#include <stdexcept>

#include "qoc/units.hpp"

namespace qoc {

double RotorParams::b_au() const { return b_cm1 * units::cm1_to_hartree; }

double RotorParams::rotational_period() const { return M_PI / b_au(); }

void RotorParams::validate() const {
    if (!(b_cm1 > 0.0)) throw std::invalid_argument("rotational constant must be positive");
    for (double v : {b_cm1, mu0, alpha_par, alpha_perp, beta_par, beta_perp}) {
        if (!std::isfinite(v)) throw std::invalid_argument("molecular constants must be finite");
    }
}

Eigen::MatrixXd cos_theta_matrix(int j_max, int m) {
    if (j_max < std::abs(m)) throw std::invalid_argument("cos_theta_matrix: |m| exceeds j_max");
    const int n = j_max - std::abs(m) + 1;
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i + 1 < n; ++i) {
        const double j = std::abs(m) + i;
        const double a =
            std::sqrt(((j + 1) * (j + 1) - double(m) * m) / ((2 * j + 1) * (2 * j + 3)));
        c(i, i + 1) = a;
        c(i + 1, i) = a;
    }
    return c;
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> cos_power_matrices(int j_max, int m) {
    // Powers taken on j_max + 3 so that every retained element is exact;
    // truncating first would corrupt the top rows.
    const Eigen::MatrixXd c1e = cos_theta_matrix(j_max + 3, m);
    const int n = j_max - std::abs(m) + 1;
    const Eigen::MatrixXd c2e = c1e * c1e;
    const Eigen::MatrixXd c3e = c2e * c1e;
    return {c2e.topLeftCorner(n, n), c3e.topLeftCorner(n, n)};
}

RotorSystem build_rotor_system(const RotorParams& params, int j_max, int m) {
    params.validate();
    if (j_max < std::abs(m)) throw std::invalid_argument("build_rotor_system: |m| exceeds j_max");
    RotorSystem sys;
    sys.params = params;
    sys.j_max = j_max;
    sys.m = m;
    const int n = sys.dim();
    sys.c1 = cos_theta_matrix(j_max, m);
    std::tie(sys.c2, sys.c3) = cos_power_matrices(j_max, m);
    sys.h0 = Eigen::MatrixXd::Zero(n, n);
    const double b = params.b_au();
    for (int i = 0; i < n; ++i) {
        const double j = std::abs(m) + i;
        sys.h0(i, i) = b * j * (j + 1);
    }
    sys.mu_op = params.mu0 * sys.c1;
    sys.alpha_op = 0.5 * ((params.alpha_par - params.alpha_perp) * sys.c2 +
                          params.alpha_perp * Eigen::MatrixXd::Identity(n, n));
    sys.beta_op = (1.0 / 6.0) * ((params.beta_par - 3.0 * params.beta_perp) * sys.c3 +
                                 3.0 * params.beta_perp * sys.c1);
    return sys;
}

Eigen::MatrixXd hamiltonian(const RotorSystem& system, double field) {
    if (!std::isfinite(field)) throw std::invalid_argument("hamiltonian: field must be finite");
    return system.coupling().hamiltonian(field);
}

TargetState build_target(int j_opt, int m, int basis_dim) {
    if (j_opt < std::abs(m)) throw std::invalid_argument("build_target: |m| exceeds j_opt");
    const int n_sub = j_opt - std::abs(m) + 1;
    if (basis_dim < n_sub) throw std::invalid_argument("build_target: basis smaller than subspace");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cos_theta_matrix(j_opt, m));
    Eigen::VectorXd v = es.eigenvectors().col(n_sub - 1);
    int imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    if (v(imax) < 0.0) v = -v;  // sign fixed for reproducibility across backends

    TargetState t;
    t.j_opt = j_opt;
    t.eigenvalue = es.eigenvalues()(n_sub - 1);
    t.vector = Eigen::VectorXcd::Zero(basis_dim);
    t.vector.head(n_sub) = v.cast<std::complex<double>>();
    return t;
}

}  // namespace qoc
