#ifndef QOC_PROPAGATE_HPP
#define QOC_PROPAGATE_HPP

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "qoc/coupling.hpp"

namespace qoc {

/// Uniform grid on [0, t_final] with n_steps segments (n_steps + 1 nodes).
/// n_steps must be even so that composite Simpson weights apply.
struct TimeGrid {
    double t_final = 0.0;
    int n_steps = 0;

    double dt() const { return t_final / n_steps; }
    double node(int i) const { return t_final * i / n_steps; }
    void validate() const;
    bool operator==(const TimeGrid&) const = default;
};

/// Real control field sampled at the grid nodes.
struct ControlField {
    TimeGrid grid;
    Eigen::VectorXd samples;  // size n_steps + 1

    static ControlField zeros(const TimeGrid& grid);
    static ControlField gaussian(const TimeGrid& grid, double peak, double center, double fwhm);
    void validate() const;
    /// integral of E^2 dt (composite Simpson).
    double energy() const;
};

using StateTrajectory = std::vector<Eigen::VectorXcd>;

/// One m-block of a density matrix; a full state is one block per m >= 0
/// with multiplicity 2 for m > 0.
using DensityBlocks = std::vector<Eigen::MatrixXcd>;
using DensityTrajectory = std::vector<DensityBlocks>;

/// exp(-i H(e) dt) |psi>, H diagonalized as a real symmetric matrix.
Eigen::VectorXcd step_state(const CouplingOps& ops, double e, double dt,
                            const Eigen::VectorXcd& psi);
/// exp(+i H(e) dt) |psi> (adjoint step).
Eigen::VectorXcd step_state_back(const CouplingOps& ops, double e, double dt,
                                 const Eigen::VectorXcd& psi);

/// Forward propagation: segment i -> i+1 uses the midpoint-averaged field
/// (E_i + E_{i+1})/2 in an exactly unitary exponential step.
StateTrajectory propagate_forward(const CouplingOps& ops, const ControlField& field,
                                  const Eigen::VectorXcd& initial);
/// Backward propagation from the final node with the adjoint of each step,
/// so backward-then-forward with the same field is an exact round trip.
StateTrajectory propagate_backward(const CouplingOps& ops, const ControlField& field,
                                   const Eigen::VectorXcd& final_state);

Eigen::MatrixXcd step_density(const CouplingOps& ops, double e, double dt,
                              const Eigen::MatrixXcd& rho);
Eigen::MatrixXcd step_density_back(const CouplingOps& ops, double e, double dt,
                                   const Eigen::MatrixXcd& rho);

/// Von Neumann propagation, one independent unitary per m-block.
DensityTrajectory propagate_density_forward(const std::vector<CouplingOps>& block_ops,
                                            const ControlField& field,
                                            const DensityBlocks& initial);
DensityTrajectory propagate_density_backward(const std::vector<CouplingOps>& block_ops,
                                             const ControlField& field,
                                             const DensityBlocks& final_state);

/// Composite Simpson weights for the grid (n_steps even).
Eigen::VectorXd simpson_weights(const TimeGrid& grid);

/// |<a|psi(t)>|^2 along a trajectory.
Eigen::VectorXd projection_curve(const StateTrajectory& traj, const Eigen::VectorXcd& a);
/// <psi(t)|Op|psi(t)> along a trajectory (real part; Op symmetric).
Eigen::VectorXd expectation_curve(const StateTrajectory& traj, const Eigen::MatrixXd& op);

}  // namespace qoc

#endif
