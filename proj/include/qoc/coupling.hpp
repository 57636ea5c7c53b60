#ifndef QOC_COUPLING_HPP
#define QOC_COUPLING_HPP

#include <Eigen/Dense>

namespace qoc {

/// Field-free Hamiltonian plus the polynomial coupling operators:
/// H(E) = h0 - E mu - E^2 alpha - E^3 beta. All real symmetric.
struct CouplingOps {
    Eigen::MatrixXd h0;
    Eigen::MatrixXd mu;
    Eigen::MatrixXd alpha;
    Eigen::MatrixXd beta;

    int dim() const { return static_cast<int>(h0.rows()); }
    bool has_linear_term() const { return mu.cwiseAbs().maxCoeff() > 0.0; }

    Eigen::MatrixXd hamiltonian(double e) const {
        return h0 - e * mu - (e * e) * alpha - (e * e * e) * beta;
    }
};

}  // namespace qoc

#endif
