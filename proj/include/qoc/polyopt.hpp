#ifndef QOC_POLYOPT_HPP
#define QOC_POLYOPT_HPP

#include <array>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "qoc/coupling.hpp"

namespace qoc {

/// The three time-local bracket values 2 Im[<psi|chi><chi|A|psi>] for
/// A in {mu, alpha, beta}. They are the coefficients of the per-point update
/// polynomials and of the critical-point equation.
struct Brackets {
    double mu = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
};

/// Per-point update parameters: penalty weight lambda/s(t) at this node,
/// cost exponent n, step constant eta, and the reference field value the
/// update is measured against (old backward/forward field at this node).
struct UpdateParams {
    double lambda_t = 0.0;
    int n = 2;
    double eta = 1.0;
    double e_ref = 0.0;
};

Brackets brackets(const Eigen::VectorXcd& chi, const Eigen::VectorXcd& psi,
                  const CouplingOps& ops);

/// Superoperator version: overlap <<chi|rho>> = Tr[chi^+ rho] and pairing
/// <<chi|A|rho>> = Tr[chi^+ [A, rho]], summed over m-blocks with the given
/// multiplicities.
Brackets brackets_density(const std::vector<Eigen::MatrixXcd>& chi,
                          const std::vector<Eigen::MatrixXcd>& rho,
                          const std::vector<CouplingOps>& block_ops,
                          const std::vector<double>& multiplicity);

/// Real roots of a x^3 + b x^2 + c x + d (degenerate leading coefficients
/// handled structurally), closed form plus a Newton polish.
int real_cubic_roots(double a, double b, double c, double d, std::array<double, 3>& roots);

/// Update integrand; with fields at their reference value this is zero:
///   P(e_new) = -lambda (e_new^{2n} - e_old^{2n}) + (e_old - e_new) mu
///              + (e_old^2 - e_new^2) alpha + (e_old^3 - e_new^3) beta.
double p_integrand(const Brackets& b, double lambda_t, int n, double e_new, double e_old);

/// Algorithm-I update: global maximizer of P viewed as a polynomial in the
/// new field value. Requires a coercive cost (n = 2 when the cubic coupling
/// bracket is present). `prev` only breaks exact ties.
double maximize_p(const Brackets& b, const UpdateParams& p, double prev);

/// Algorithm-II update: real root of
///   x - e_ref = eta [ -lambda sum_{i<2n} x^i e_ref^{2n-1-i} - mu
///                     - alpha (x + e_ref) - beta (x^2 + x e_ref + e_ref^2) ],
/// choosing the root closest to `prev` (ties: smaller magnitude).
double solve_update_ii(const Brackets& b, const UpdateParams& p, double prev);

/// Left-hand side of the critical-point equation
///   2 n lambda(t) E^{2n-1} + mu + 2 alpha E + 3 beta E^2.
double critical_point_lhs(const Brackets& b, double lambda_t, int n, double e);

}  // namespace qoc

#endif
