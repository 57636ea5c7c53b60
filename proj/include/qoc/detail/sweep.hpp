#ifndef QOC_DETAIL_SWEEP_HPP
#define QOC_DETAIL_SWEEP_HPP

#include <cmath>
#include <utility>

#include "qoc/monotonic_types.hpp"
#include "qoc/polyopt.hpp"

namespace qoc::detail {

// One node of a sweep. Solves the update self-consistently: the candidate
// field steps the state, the stepped state gives the brackets, and the
// accepted value must make the update integrand nonnegative under its own
// brackets. Keeping the reference field value is always admissible (the
// integrand is then exactly zero), which is the fallback when the iteration
// cycles between near-degenerate candidates.
template <typename StateT>
struct NodeResult {
    double field = 0.0;
    StateT state;
    bool fallback = false;
};

template <typename StateT, typename StepFn, typename BracketFn>
NodeResult<StateT> update_node(const StepFn& step_with, const BracketFn& brackets_of,
                               Algorithm algo, const UpdateParams& params, double prev,
                               bool pinned) {
    constexpr int max_fp = 10;
    NodeResult<StateT> res;
    if (pinned) {
        res.field = 0.0;
        res.state = step_with(0.0);
        return res;
    }
    double x = prev;
    bool have_ok = false;
    for (int it = 0; it < max_fp; ++it) {
        StateT cand = step_with(x);
        const Brackets b = brackets_of(cand);
        if (p_integrand(b, params.lambda_t, params.n, x, params.e_ref) >= 0.0) {
            have_ok = true;
            res.field = x;
            res.state = std::move(cand);
        }
        const double xn = (algo == Algorithm::II) ? solve_update_ii(b, params, prev)
                                                  : maximize_p(b, params, prev);
        if (have_ok && std::abs(xn - x) <= 1e-12 * std::max(1.0, std::abs(x))) break;
        x = xn;
    }
    if (!have_ok) {
        res.field = params.e_ref;
        res.state = step_with(params.e_ref);
        res.fallback = true;
    }
    return res;
}

}  // namespace qoc::detail

#endif
