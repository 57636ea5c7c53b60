#ifndef QOC_MONOTONIC_HPP
#define QOC_MONOTONIC_HPP

#include <optional>
#include <string>
#include <vector>

#include "qoc/polyopt.hpp"
#include "qoc/propagate.hpp"

namespace qoc {

enum class Algorithm { I, II };

/// Outer-loop settings. The time-dependent penalty is
/// lambda(t) = lambda / sin^2(pi t / t_f); fields are pinned to zero at both
/// grid endpoints where that weight diverges.
struct OptimizationConfig {
    Algorithm algorithm = Algorithm::II;
    bool simplified = true;  // propagate the adjoint with the forward field
    int n = 2;
    double lambda = 1.0;
    double eta1 = 1.0;
    double eta2 = 1.0;
    int max_iters = 100;
    double stop_tol = 1e-6;

    void validate() const;
};

struct IterationRecord {
    int k = 0;
    double cost_j = 0.0;
    double projection = 0.0;
    double fluence_penalty = 0.0;
    double field_energy = 0.0;
    double residual = 0.0;  // max-norm of the critical-point equation
    double p1 = 0.0;
    double p2 = 0.0;
    double delta_j = 0.0;
};

enum class StopReason { converged, max_iters, step_rejected };

struct RunResult {
    ControlField field;
    std::vector<IterationRecord> records;
    StateTrajectory trajectory;
    StopReason stop = StopReason::max_iters;
    long fallback_nodes = 0;  // nodes kept at their reference value
};

/// lambda/s(t) at interior nodes, zero at the endpoints (fields there are
/// pinned, so the endpoint integrand is zero by convention).
Eigen::VectorXd penalty_profile(const TimeGrid& grid, double lambda);

/// Composite-Simpson value of the fluence penalty against a profile.
double fluence_penalty(const ControlField& field, const Eigen::VectorXd& profile, int n,
                       const Eigen::VectorXd& weights);

/// Monotonic optimization of |<target|psi(t_f)>|^2 - penalty for a pure
/// state under H(E) = h0 - E mu - E^2 alpha - E^3 beta.
RunResult run_pure(const CouplingOps& ops, const Eigen::VectorXcd& initial,
                   const Eigen::VectorXcd& target, const ControlField& trial,
                   const OptimizationConfig& cfg);

/// Max over interior nodes of |2 n lambda(t) E^{2n-1} + brackets|, both
/// trajectories propagated with the same field.
double stationarity_residual(const CouplingOps& ops, const ControlField& field,
                             const StateTrajectory& psi, const StateTrajectory& chi,
                             double lambda, int n);

struct GradientCheck {
    double analytic = 0.0;
    double numeric = 0.0;
};

/// Directional derivative of the cost along a perturbation (pinned at the
/// endpoints), adjoint-based versus central finite differences.
GradientCheck variational_gradient_check(const CouplingOps& ops, const Eigen::VectorXcd& initial,
                                         const Eigen::VectorXcd& target,
                                         const ControlField& field,
                                         const ControlField& perturbation, double lambda, int n,
                                         double eps = 1e-6);

}  // namespace qoc

#endif
