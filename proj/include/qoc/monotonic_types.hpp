#ifndef QOC_MONOTONIC_TYPES_HPP
#define QOC_MONOTONIC_TYPES_HPP

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

}  // namespace qoc

#endif
