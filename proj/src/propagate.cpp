#include "qoc/propagate.hpp"

#include <cmath>
#include <stdexcept>

namespace qoc {

void TimeGrid::validate() const {
    if (!(t_final > 0.0) || !std::isfinite(t_final))
        throw std::invalid_argument("TimeGrid: t_final must be positive and finite");
    if (n_steps < 2) throw std::invalid_argument("TimeGrid: n_steps must be >= 2");
    if (n_steps % 2 != 0) throw std::invalid_argument("TimeGrid: n_steps must be even");
}

ControlField ControlField::zeros(const TimeGrid& grid) {
    grid.validate();
    return ControlField{grid, Eigen::VectorXd::Zero(grid.n_steps + 1)};
}

ControlField ControlField::gaussian(const TimeGrid& grid, double peak, double center,
                                    double fwhm) {
    grid.validate();
    ControlField f{grid, Eigen::VectorXd::Zero(grid.n_steps + 1)};
    const double c = 4.0 * std::log(2.0) / (fwhm * fwhm);
    for (int i = 0; i <= grid.n_steps; ++i) {
        const double t = grid.node(i);
        f.samples(i) = peak * std::exp(-c * (t - center) * (t - center));
    }
    f.samples(0) = 0.0;
    f.samples(grid.n_steps) = 0.0;
    return f;
}

void ControlField::validate() const {
    grid.validate();
    if (samples.size() != grid.n_steps + 1)
        throw std::invalid_argument("ControlField: samples must have n_steps + 1 entries");
    if (!samples.allFinite()) throw std::invalid_argument("ControlField: samples must be finite");
}

double ControlField::energy() const {
    return simpson_weights(grid).dot(samples.cwiseProduct(samples));
}

Eigen::VectorXd simpson_weights(const TimeGrid& grid) {
    grid.validate();
    Eigen::VectorXd w = Eigen::VectorXd::Ones(grid.n_steps + 1);
    for (int i = 1; i < grid.n_steps; ++i) w(i) = (i % 2 == 1) ? 4.0 : 2.0;
    return w * (grid.dt() / 3.0);
}

namespace {

struct EigStep {
    Eigen::MatrixXd q;
    Eigen::VectorXcd phase;
};

EigStep eig_step(const CouplingOps& ops, double e, double dt, bool backward) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(ops.hamiltonian(e));
    const double sign = backward ? 1.0 : -1.0;
    EigStep s;
    s.q = es.eigenvectors();
    s.phase.resize(es.eigenvalues().size());
    for (int i = 0; i < s.phase.size(); ++i) {
        s.phase(i) = std::polar(1.0, sign * es.eigenvalues()(i) * dt);
    }
    return s;
}

}  // namespace

Eigen::VectorXcd step_state(const CouplingOps& ops, double e, double dt,
                            const Eigen::VectorXcd& psi) {
    const EigStep s = eig_step(ops, e, dt, false);
    return s.q * s.phase.cwiseProduct(s.q.transpose() * psi);
}

Eigen::VectorXcd step_state_back(const CouplingOps& ops, double e, double dt,
                                 const Eigen::VectorXcd& psi) {
    const EigStep s = eig_step(ops, e, dt, true);
    return s.q * s.phase.cwiseProduct(s.q.transpose() * psi);
}

StateTrajectory propagate_forward(const CouplingOps& ops, const ControlField& field,
                                  const Eigen::VectorXcd& initial) {
    field.validate();
    if (initial.size() != ops.dim())
        throw std::invalid_argument("propagate_forward: state/operator dimension mismatch");
    const int n = field.grid.n_steps;
    const double dt = field.grid.dt();
    StateTrajectory traj(n + 1);
    traj[0] = initial;
    for (int i = 0; i < n; ++i) {
        traj[i + 1] = step_state(ops, 0.5 * (field.samples(i) + field.samples(i + 1)), dt, traj[i]);
    }
    return traj;
}

StateTrajectory propagate_backward(const CouplingOps& ops, const ControlField& field,
                                   const Eigen::VectorXcd& final_state) {
    field.validate();
    if (final_state.size() != ops.dim())
        throw std::invalid_argument("propagate_backward: state/operator dimension mismatch");
    const int n = field.grid.n_steps;
    const double dt = field.grid.dt();
    StateTrajectory traj(n + 1);
    traj[n] = final_state;
    for (int i = n; i > 0; --i) {
        traj[i - 1] =
            step_state_back(ops, 0.5 * (field.samples(i - 1) + field.samples(i)), dt, traj[i]);
    }
    return traj;
}

Eigen::MatrixXcd step_density(const CouplingOps& ops, double e, double dt,
                              const Eigen::MatrixXcd& rho) {
    const EigStep s = eig_step(ops, e, dt, false);
    const Eigen::MatrixXcd u = s.q * s.phase.asDiagonal() * s.q.transpose();
    return u * rho * u.adjoint();
}

Eigen::MatrixXcd step_density_back(const CouplingOps& ops, double e, double dt,
                                   const Eigen::MatrixXcd& rho) {
    const EigStep s = eig_step(ops, e, dt, true);
    const Eigen::MatrixXcd u = s.q * s.phase.asDiagonal() * s.q.transpose();
    return u * rho * u.adjoint();
}

namespace {

void check_density_input(const std::vector<CouplingOps>& block_ops, const DensityBlocks& blocks) {
    if (block_ops.size() != blocks.size())
        throw std::invalid_argument("density propagation: block count mismatch");
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        if (blocks[b].rows() != block_ops[b].dim() || blocks[b].cols() != block_ops[b].dim())
            throw std::invalid_argument("density propagation: block dimension mismatch");
        const double herm = (blocks[b] - blocks[b].adjoint()).cwiseAbs().maxCoeff();
        if (herm > 1e-10) throw std::invalid_argument("density propagation: non-Hermitian block");
    }
}

}  // namespace

DensityTrajectory propagate_density_forward(const std::vector<CouplingOps>& block_ops,
                                            const ControlField& field,
                                            const DensityBlocks& initial) {
    field.validate();
    check_density_input(block_ops, initial);
    const int n = field.grid.n_steps;
    const double dt = field.grid.dt();
    DensityTrajectory traj(n + 1);
    traj[0] = initial;
    for (int i = 0; i < n; ++i) {
        const double e = 0.5 * (field.samples(i) + field.samples(i + 1));
        traj[i + 1].resize(initial.size());
        for (std::size_t b = 0; b < initial.size(); ++b) {
            traj[i + 1][b] = step_density(block_ops[b], e, dt, traj[i][b]);
        }
    }
    return traj;
}

DensityTrajectory propagate_density_backward(const std::vector<CouplingOps>& block_ops,
                                             const ControlField& field,
                                             const DensityBlocks& final_state) {
    field.validate();
    check_density_input(block_ops, final_state);
    const int n = field.grid.n_steps;
    const double dt = field.grid.dt();
    DensityTrajectory traj(n + 1);
    traj[n] = final_state;
    for (int i = n; i > 0; --i) {
        const double e = 0.5 * (field.samples(i - 1) + field.samples(i));
        traj[i - 1].resize(final_state.size());
        for (std::size_t b = 0; b < final_state.size(); ++b) {
            traj[i - 1][b] = step_density_back(block_ops[b], e, dt, traj[i][b]);
        }
    }
    return traj;
}

Eigen::VectorXd projection_curve(const StateTrajectory& traj, const Eigen::VectorXcd& a) {
    Eigen::VectorXd out(traj.size());
    for (std::size_t i = 0; i < traj.size(); ++i) out(i) = std::norm(a.dot(traj[i]));
    return out;
}

Eigen::VectorXd expectation_curve(const StateTrajectory& traj, const Eigen::MatrixXd& op) {
    Eigen::VectorXd out(traj.size());
    for (std::size_t i = 0; i < traj.size(); ++i) {
        out(i) = std::real(traj[i].dot(op * traj[i]));
    }
    return out;
}

}  // namespace qoc
