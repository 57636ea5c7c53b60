#include "qoc/twocolor.hpp"

#include <cmath>

#include "qoc/errors.hpp"

namespace qoc {

CouplingOps TwoColorSystem::single_envelope_coupling() const {
    const int n = dim();
    return CouplingOps{base.h0, Eigen::MatrixXd::Zero(n, n), 2.0 * alpha_avg_op, beta_avg_op};
}

TwoColorSystem build_two_color(const RotorSystem& base, double omega) {
    TwoColorSystem sys;
    sys.base = base;
    const int n = base.dim();
    const RotorParams& p = base.params;
    sys.alpha_avg_op = 0.25 * ((p.alpha_par - p.alpha_perp) * base.c2 +
                               p.alpha_perp * Eigen::MatrixXd::Identity(n, n));
    sys.beta_avg_op = 0.125 * ((p.beta_par - 3.0 * p.beta_perp) * base.c3 +
                               3.0 * p.beta_perp * base.c1);
    sys.omega = omega;
    return sys;
}

Eigen::MatrixXd averaged_hamiltonian(const TwoColorSystem& sys, double e1, double e2) {
    if (!std::isfinite(e1) || !std::isfinite(e2))
        throw std::invalid_argument("averaged_hamiltonian: fields must be finite");
    return sys.base.h0 - (e1 * e1 + e2 * e2) * sys.alpha_avg_op -
           (e1 * e1 * e2) * sys.beta_avg_op;
}

namespace {

Eigen::MatrixXcd dual_step_unitary(const TwoColorSystem& sys, double e1, double e2, double dt,
                                   bool backward) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(averaged_hamiltonian(sys, e1, e2));
    const double sign = backward ? 1.0 : -1.0;
    Eigen::VectorXcd phase(es.eigenvalues().size());
    for (int i = 0; i < phase.size(); ++i)
        phase(i) = std::polar(1.0, sign * es.eigenvalues()(i) * dt);
    return es.eigenvectors() * phase.asDiagonal() * es.eigenvectors().transpose();
}

StateTrajectory dual_forward(const TwoColorSystem& sys, const DualField& f,
                             const Eigen::VectorXcd& initial) {
    const int n = f.e1.grid.n_steps;
    const double dt = f.e1.grid.dt();
    StateTrajectory traj(n + 1);
    traj[0] = initial;
    for (int i = 0; i < n; ++i) {
        const double m1 = 0.5 * (f.e1.samples(i) + f.e1.samples(i + 1));
        const double m2 = 0.5 * (f.e2.samples(i) + f.e2.samples(i + 1));
        traj[i + 1] = dual_step_unitary(sys, m1, m2, dt, false) * traj[i];
    }
    return traj;
}

StateTrajectory dual_backward(const TwoColorSystem& sys, const DualField& f,
                              const Eigen::VectorXcd& final_state) {
    const int n = f.e1.grid.n_steps;
    const double dt = f.e1.grid.dt();
    StateTrajectory traj(n + 1);
    traj[n] = final_state;
    for (int i = n; i > 0; --i) {
        const double m1 = 0.5 * (f.e1.samples(i - 1) + f.e1.samples(i));
        const double m2 = 0.5 * (f.e2.samples(i - 1) + f.e2.samples(i));
        traj[i - 1] = dual_step_unitary(sys, m1, m2, dt, true) * traj[i];
    }
    return traj;
}

struct AvgBrackets {
    double alpha = 0.0;
    double beta = 0.0;
};

AvgBrackets avg_brackets(const TwoColorSystem& sys, const Eigen::VectorXcd& chi,
                         const Eigen::VectorXcd& psi) {
    const std::complex<double> z = psi.dot(chi);
    AvgBrackets b;
    b.alpha = 2.0 * std::imag(z * chi.dot(sys.alpha_avg_op * psi));
    b.beta = 2.0 * std::imag(z * chi.dot(sys.beta_avg_op * psi));
    return b;
}

// Update integrands of the dual scheme at one node. E2 moves first against
// the previous E1; E1 then sees the fresh E2.
double p2_dual(const AvgBrackets& b, double lam, int n, double e2_new, double e2_old,
               double e1_old) {
    return p_integrand(Brackets{b.beta * e1_old * e1_old, b.alpha, 0.0}, lam, n, e2_new, e2_old);
}

double p1_dual(const AvgBrackets& b, double lam, int n, double e1_new, double e1_old,
               double e2_new) {
    return p_integrand(Brackets{0.0, b.alpha + b.beta * e2_new, 0.0}, lam, n, e1_new, e1_old);
}

double dual_residual(const TwoColorSystem& sys, const DualField& f, const StateTrajectory& psi,
                     const StateTrajectory& chi, double lambda, int n) {
    const Eigen::VectorXd profile = penalty_profile(f.e1.grid, lambda);
    double worst = 0.0;
    for (int i = 1; i < f.e1.grid.n_steps; ++i) {
        const AvgBrackets b = avg_brackets(sys, chi[i], psi[i]);
        const double e1 = f.e1.samples(i);
        const double e2 = f.e2.samples(i);
        const double r1 = critical_point_lhs(Brackets{0.0, b.alpha + b.beta * e2, 0.0},
                                             profile(i), n, e1);
        const double r2 = critical_point_lhs(Brackets{b.beta * e1 * e1, b.alpha, 0.0},
                                             profile(i), n, e2);
        worst = std::max(worst, std::max(std::abs(r1), std::abs(r2)));
    }
    return worst;
}

}  // namespace

DualRunResult run_dual(const TwoColorSystem& sys, const Eigen::VectorXcd& initial,
                       const Eigen::VectorXcd& target, const ControlField& trial1,
                       const ControlField& trial2, const OptimizationConfig& cfg) {
    cfg.validate();
    trial1.validate();
    trial2.validate();
    if (!(trial1.grid == trial2.grid)) throw ConfigError("run_dual: trial fields on different grids");
    if (trial1.samples.cwiseAbs().maxCoeff() == 0.0 || trial2.samples.cwiseAbs().maxCoeff() == 0.0)
        throw ConfigError("zero trial field cannot seed nonlinear-only coupling");

    const TimeGrid grid = trial1.grid;
    const int nseg = grid.n_steps;
    const double dt = grid.dt();
    const Eigen::VectorXd profile = penalty_profile(grid, cfg.lambda);
    const Eigen::VectorXd weights = simpson_weights(grid);

    DualRunResult res;
    res.fields = DualField{trial1, trial2};
    for (ControlField* f : {&res.fields.e1, &res.fields.e2}) {
        f->samples(0) = 0.0;
        f->samples(nseg) = 0.0;
    }
    res.trajectory = dual_forward(sys, res.fields, initial);

    const auto penalty_of = [&](const DualField& f) {
        return fluence_penalty(f.e1, profile, cfg.n, weights) +
               fluence_penalty(f.e2, profile, cfg.n, weights);
    };
    const auto make_record = [&](int k, double p1, double p2, double dj) {
        IterationRecord rec;
        rec.k = k;
        rec.projection = std::norm(target.dot(res.trajectory.back()));
        rec.fluence_penalty = penalty_of(res.fields);
        rec.cost_j = rec.projection - rec.fluence_penalty;
        rec.field_energy = res.fields.e1.energy() + res.fields.e2.energy();
        rec.residual = dual_residual(sys, res.fields, res.trajectory,
                                     dual_backward(sys, res.fields, target), cfg.lambda, cfg.n);
        rec.p1 = p1;
        rec.p2 = p2;
        rec.delta_j = dj;
        return rec;
    };
    res.records.push_back(make_record(0, 0.0, 0.0, 0.0));
    double cost = res.records.back().cost_j;

    res.stop = StopReason::max_iters;
    for (int k = 1; k <= cfg.max_iters; ++k) {
        const StateTrajectory chi = dual_backward(sys, res.fields, target);
        DualField fn{ControlField::zeros(grid), ControlField::zeros(grid)};
        StateTrajectory traj(nseg + 1);
        traj[0] = initial;
        double prev1 = 0.0, prev2 = 0.0;

        for (int i = 0; i < nseg; ++i) {
            const int j = i + 1;
            const double e1_old = res.fields.e1.samples(j);
            const double e2_old = res.fields.e2.samples(j);
            const double lam = profile(j);
            const auto step_with = [&](double x1, double x2) -> Eigen::VectorXcd {
                const double m1 = 0.5 * (fn.e1.samples(i) + x1);
                const double m2 = 0.5 * (fn.e2.samples(i) + x2);
                return dual_step_unitary(sys, m1, m2, dt, false) * traj[i];
            };

            double x1 = prev1, x2 = prev2;
            bool have_ok = false;
            double ok1 = 0.0, ok2 = 0.0;
            Eigen::VectorXcd ok_state;
            if (j == nseg) {
                have_ok = true;
                ok1 = ok2 = 0.0;
                ok_state = step_with(0.0, 0.0);
            } else {
                for (int it = 0; it < 10; ++it) {
                    Eigen::VectorXcd cand = step_with(x1, x2);
                    const AvgBrackets b = avg_brackets(sys, chi[j], cand);
                    if (p2_dual(b, lam, cfg.n, x2, e2_old, e1_old) >= 0.0 &&
                        p1_dual(b, lam, cfg.n, x1, e1_old, x2) >= 0.0) {
                        have_ok = true;
                        ok1 = x1;
                        ok2 = x2;
                        ok_state = std::move(cand);
                    }
                    const UpdateParams q2{lam, cfg.n, cfg.eta2, e2_old};
                    const Brackets b2{b.beta * e1_old * e1_old, b.alpha, 0.0};
                    const double x2n = (cfg.algorithm == Algorithm::II)
                                           ? solve_update_ii(b2, q2, prev2)
                                           : maximize_p(b2, q2, prev2);
                    const UpdateParams q1{lam, cfg.n, cfg.eta1, e1_old};
                    const Brackets b1{0.0, b.alpha + b.beta * x2n, 0.0};
                    const double x1n = (cfg.algorithm == Algorithm::II)
                                           ? solve_update_ii(b1, q1, prev1)
                                           : maximize_p(b1, q1, prev1);
                    const bool conv = std::abs(x1n - x1) <= 1e-12 * std::max(1.0, std::abs(x1)) &&
                                      std::abs(x2n - x2) <= 1e-12 * std::max(1.0, std::abs(x2));
                    x1 = x1n;
                    x2 = x2n;
                    if (have_ok && conv) break;
                }
                if (!have_ok) {
                    // keep E1 at its old value (its integrand is then zero)
                    // and retry E2 alone before the full fallback
                    Eigen::VectorXcd cand = step_with(e1_old, x2);
                    const AvgBrackets b = avg_brackets(sys, chi[j], cand);
                    if (p2_dual(b, lam, cfg.n, x2, e2_old, e1_old) >= 0.0) {
                        have_ok = true;
                        ok1 = e1_old;
                        ok2 = x2;
                        ok_state = std::move(cand);
                    }
                }
                if (!have_ok) {
                    ok1 = e1_old;
                    ok2 = e2_old;
                    ok_state = step_with(e1_old, e2_old);
                    ++res.fallback_nodes;
                }
            }
            fn.e1.samples(j) = ok1;
            fn.e2.samples(j) = ok2;
            traj[j] = std::move(ok_state);
            prev1 = ok1;
            prev2 = ok2;
        }

        double p1 = 0.0, p2 = 0.0;
        for (int i = 0; i <= nseg; ++i) {
            const AvgBrackets b = avg_brackets(sys, chi[i], traj[i]);
            p2 += weights(i) * p2_dual(b, profile(i), cfg.n, fn.e2.samples(i),
                                       res.fields.e2.samples(i), res.fields.e1.samples(i));
            p1 += weights(i) * p1_dual(b, profile(i), cfg.n, fn.e1.samples(i),
                                       res.fields.e1.samples(i), fn.e2.samples(i));
        }
        if (p1 < -1e-12 || p2 < -1e-12)
            throw NumericError("update integrand turned negative; positivity enforcement broken");

        const double cost_new = std::norm(target.dot(traj.back())) - penalty_of(fn);
        const double dj = cost_new - cost;
        if (dj < -1e-6)
            throw NumericError("non-monotone step: cost decreased by " + std::to_string(-dj));
        if (dj < -1e-10) {
            res.stop = StopReason::step_rejected;
            break;
        }
        res.fields = std::move(fn);
        res.trajectory = std::move(traj);
        cost = cost_new;
        res.records.push_back(make_record(k, p1, p2, dj));
        if (dj < cfg.stop_tol) {
            res.stop = StopReason::converged;
            break;
        }
    }
    return res;
}

RunResult run_single(const TwoColorSystem& sys, const Eigen::VectorXcd& initial,
                     const Eigen::VectorXcd& target, const ControlField& trial,
                     const OptimizationConfig& cfg) {
    return run_pure(sys.single_envelope_coupling(), initial, target, trial, cfg);
}

}  // namespace qoc
