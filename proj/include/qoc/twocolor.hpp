#ifndef QOC_TWOCOLOR_HPP
#define QOC_TWOCOLOR_HPP

#include "qoc/monotonic.hpp"
#include "qoc/rotor.hpp"

namespace qoc {

/// Averaged model of a non-resonant two-color field E1 cos(wt) + E2 cos(2wt):
/// H = h0 - alpha_avg (E1^2 + E2^2) - beta_avg E1^2 E2. The permanent dipole
/// drops out entirely; the carrier frequency is kept only for reporting.
struct TwoColorSystem {
    RotorSystem base;
    Eigen::MatrixXd alpha_avg_op;
    Eigen::MatrixXd beta_avg_op;
    double omega = 0.0;

    int dim() const { return base.dim(); }
    /// Coupling for the single-envelope case E1 = E2 = E, where the field
    /// enters as H = h0 - 2 alpha_avg E^2 - beta_avg E^3 (no linear term).
    CouplingOps single_envelope_coupling() const;
};

TwoColorSystem build_two_color(const RotorSystem& base, double omega = 0.0);

Eigen::MatrixXd averaged_hamiltonian(const TwoColorSystem& sys, double e1, double e2);

struct DualField {
    ControlField e1;
    ControlField e2;
};

struct DualRunResult {
    DualField fields;
    std::vector<IterationRecord> records;
    StateTrajectory trajectory;
    StopReason stop = StopReason::max_iters;
    long fallback_nodes = 0;
};

/// Dual-envelope optimization: each iteration updates E2 first and then E1
/// (the cross term carries E1^2 E2), the adjoint propagating with the
/// previous fields. Penalty: integral of lambda(t) (E1^{2n} + E2^{2n}).
DualRunResult run_dual(const TwoColorSystem& sys, const Eigen::VectorXcd& initial,
                       const Eigen::VectorXcd& target, const ControlField& trial1,
                       const ControlField& trial2, const OptimizationConfig& cfg);

/// Single-envelope case via the standard loop; nodes where the trial is
/// exactly zero stay zero (no linear coupling).
RunResult run_single(const TwoColorSystem& sys, const Eigen::VectorXcd& initial,
                     const Eigen::VectorXcd& target, const ControlField& trial,
                     const OptimizationConfig& cfg);

}  // namespace qoc

#endif
