#include "qoc/polyopt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qoc/errors.hpp"

namespace qoc {

Brackets brackets(const Eigen::VectorXcd& chi, const Eigen::VectorXcd& psi,
                  const CouplingOps& ops) {
    if (chi.size() != psi.size() || chi.size() != ops.dim())
        throw std::invalid_argument("brackets: dimension mismatch");
    const std::complex<double> z = psi.dot(chi);  // <psi|chi>
    Brackets b;
    b.mu = 2.0 * std::imag(z * chi.dot(ops.mu * psi));
    b.alpha = 2.0 * std::imag(z * chi.dot(ops.alpha * psi));
    b.beta = 2.0 * std::imag(z * chi.dot(ops.beta * psi));
    return b;
}

Brackets brackets_density(const std::vector<Eigen::MatrixXcd>& chi,
                          const std::vector<Eigen::MatrixXcd>& rho,
                          const std::vector<CouplingOps>& block_ops,
                          const std::vector<double>& multiplicity) {
    if (chi.size() != rho.size() || chi.size() != block_ops.size() ||
        chi.size() != multiplicity.size())
        throw std::invalid_argument("brackets_density: block count mismatch");
    std::complex<double> z = 0.0;   // <<rho|chi>> = Tr[rho^+ chi]
    std::complex<double> cm = 0.0;  // Tr[chi^+ [A, rho]] accumulators
    std::complex<double> ca = 0.0;
    std::complex<double> cb = 0.0;
    for (std::size_t b = 0; b < chi.size(); ++b) {
        const double w = multiplicity[b];
        z += w * (rho[b].adjoint() * chi[b]).trace();
        const Eigen::MatrixXcd chid = chi[b].adjoint();
        const auto pair_with = [&](const Eigen::MatrixXd& op) {
            return (chid * (op * rho[b] - rho[b] * op)).trace();
        };
        cm += w * pair_with(block_ops[b].mu);
        ca += w * pair_with(block_ops[b].alpha);
        cb += w * pair_with(block_ops[b].beta);
    }
    Brackets out;
    out.mu = 2.0 * std::imag(z * cm);
    out.alpha = 2.0 * std::imag(z * ca);
    out.beta = 2.0 * std::imag(z * cb);
    return out;
}

namespace {

double poly3(double a, double b, double c, double d, double x) {
    return ((a * x + b) * x + c) * x + d;
}

double polish_root(double a, double b, double c, double d, double x) {
    for (int it = 0; it < 3; ++it) {
        const double f = poly3(a, b, c, d, x);
        const double df = (3.0 * a * x + 2.0 * b) * x + c;
        if (df == 0.0) break;
        const double step = f / df;
        if (!std::isfinite(step)) break;
        x -= step;
    }
    return x;
}

}  // namespace

int real_cubic_roots(double a, double b, double c, double d, std::array<double, 3>& roots) {
    if (d == 0.0) {
        // x = 0 is an exact root; keep it exact and factor the rest.
        std::array<double, 3> rest{};
        const int nr = real_cubic_roots(0.0, a, b, c, rest);
        roots[0] = 0.0;
        int n = 1;
        for (int i = 0; i < nr && n < 3; ++i) {
            if (rest[i] != 0.0) roots[n++] = rest[i];
        }
        return n;
    }
    if (a == 0.0) {
        if (b == 0.0) {
            if (c == 0.0) return 0;  // constant: no root (or everything, if d == 0)
            roots[0] = -d / c;
            return 1;
        }
        const double disc = c * c - 4.0 * b * d;
        if (disc < 0.0) return 0;
        const double s = std::sqrt(disc);
        // Citardauq-style split keeps both roots accurate.
        const double q = -0.5 * (c + (c >= 0.0 ? s : -s));
        roots[0] = q / b;
        roots[1] = (q != 0.0) ? d / q : -c / b - roots[0];
        if (disc == 0.0) return 1;
        return 2;
    }

    const double bn = b / a;
    const double cn = c / a;
    const double dn = d / a;
    // depressed form t^3 + p t + q, x = t - bn/3
    const double shift = bn / 3.0;
    const double p = cn - bn * bn / 3.0;
    const double q = 2.0 * bn * bn * bn / 27.0 - bn * cn / 3.0 + dn;
    const double disc = q * q / 4.0 + p * p * p / 27.0;

    int nroots = 0;
    if (disc > 0.0) {
        const double s = std::sqrt(disc);
        const double u = std::cbrt(-q / 2.0 + s);
        const double v = std::cbrt(-q / 2.0 - s);
        roots[nroots++] = u + v - shift;
    } else if (p == 0.0 && q == 0.0) {
        roots[nroots++] = -shift;
    } else {
        const double r = std::sqrt(-p * p * p / 27.0);
        const double phi = std::acos(std::clamp(-q / (2.0 * r), -1.0, 1.0));
        const double mag = 2.0 * std::sqrt(-p / 3.0);
        for (int k = 0; k < 3; ++k) {
            roots[nroots++] = mag * std::cos((phi + 2.0 * M_PI * k) / 3.0) - shift;
        }
    }
    for (int i = 0; i < nroots; ++i) roots[i] = polish_root(a, b, c, d, roots[i]);
    return nroots;
}

double p_integrand(const Brackets& b, double lambda_t, int n, double e_new, double e_old) {
    const auto pw2n = [n](double x) { return n == 2 ? x * x * x * x : x * x; };
    return -lambda_t * (pw2n(e_new) - pw2n(e_old)) + (e_old - e_new) * b.mu +
           (e_old * e_old - e_new * e_new) * b.alpha +
           (e_old * e_old * e_old - e_new * e_new * e_new) * b.beta;
}

double critical_point_lhs(const Brackets& b, double lambda_t, int n, double e) {
    const double epow = (n == 2) ? e * e * e : e;
    return 2.0 * n * lambda_t * epow + b.mu + 2.0 * b.alpha * e + 3.0 * b.beta * e * e;
}

double maximize_p(const Brackets& b, const UpdateParams& p, double prev) {
    if (p.n != 1 && p.n != 2) throw ConfigError("maximize_p: cost exponent must be 1 or 2");
    // phi(x) = -lambda x^{2n} - beta x^3 - alpha x^2 - mu x  (constant dropped);
    // stationary points are roots of phi'.
    std::array<double, 3> roots{};
    int nr = 0;
    if (p.n == 2) {
        nr = real_cubic_roots(-4.0 * p.lambda_t, -3.0 * b.beta, -2.0 * b.alpha, -b.mu, roots);
    } else {
        if (b.beta != 0.0)
            throw ConfigError(
                "maximize_p: n = 1 cost is not coercive against a cubic coupling; use n = 2");
        if (p.lambda_t + b.alpha <= 0.0)
            throw ConfigError("maximize_p: n = 1 cost is not coercive at this node; use n = 2");
        nr = real_cubic_roots(0.0, 0.0, -2.0 * (p.lambda_t + b.alpha), -b.mu, roots);
    }
    if (nr == 0) throw NumericError("maximize_p: no stationary point");

    const auto phi = [&](double x) {
        const double x2n = (p.n == 2) ? x * x * x * x : x * x;
        return -p.lambda_t * x2n - b.beta * x * x * x - b.alpha * x * x - b.mu * x;
    };
    double best = roots[0];
    double best_val = phi(best);
    for (int i = 1; i < nr; ++i) {
        const double v = phi(roots[i]);
        const double tol = 1e-12 * (std::abs(v) + std::abs(best_val)) +
                           std::numeric_limits<double>::min();
        if (v > best_val + tol) {
            best = roots[i];
            best_val = v;
        } else if (v >= best_val - tol) {
            // exact tie: prefer continuity with the adjacent node, then the
            // smaller field magnitude
            const double dn = std::abs(roots[i] - prev), db = std::abs(best - prev);
            if (dn < db || (dn == db && std::abs(roots[i]) < std::abs(best))) {
                best = roots[i];
                best_val = v;
            }
        }
    }
    return best;
}

double solve_update_ii(const Brackets& b, const UpdateParams& p, double prev) {
    if (p.n != 1 && p.n != 2) throw ConfigError("solve_update_ii: cost exponent must be 1 or 2");
    if (!(p.eta > 0.0)) throw ConfigError("solve_update_ii: eta must be positive");
    const double e = p.e_ref;
    const double eta = p.eta;
    const double lam = p.lambda_t;
    double a3, a2, a1, a0;
    if (p.n == 2) {
        a3 = eta * lam;
        a2 = eta * (lam * e + b.beta);
        a1 = 1.0 + eta * (lam * e * e + b.alpha + b.beta * e);
        a0 = -e + eta * (lam * e * e * e + b.mu + b.alpha * e + b.beta * e * e);
    } else {
        a3 = 0.0;
        a2 = eta * b.beta;
        a1 = 1.0 + eta * (lam + b.alpha + b.beta * e);
        a0 = -e + eta * (lam * e + b.mu + b.alpha * e + b.beta * e * e);
    }
    std::array<double, 3> roots{};
    const int nr = real_cubic_roots(a3, a2, a1, a0, roots);
    if (nr == 0)
        throw NumericError(
            "solve_update_ii: update equation has no real root (cost exponent too small for "
            "this coupling/penalty)");
    double best = roots[0];
    for (int i = 1; i < nr; ++i) {
        const double dn = std::abs(roots[i] - prev), db = std::abs(best - prev);
        const double tie = 1e-12 * std::max(1.0, std::max(dn, db));
        if (dn < db - tie) {
            best = roots[i];
        } else if (dn <= db + tie && std::abs(roots[i]) < std::abs(best)) {
            best = roots[i];
        }
    }
    return best;
}

}  // namespace qoc
