#pragma once

#include <cstddef>

#include "dalupi/io.hpp"

namespace dalupi {

/// Scalars entering the uniform-convergence (pseudo-dimension) bound for
/// the two-stage estimator: empirical risks of the two stages, sample
/// counts, capacity surrogates (parameter counts for the predictors used
/// here), the PI dimension d_w, the Lipschitz constant M of the outcome
/// stage, the loss bound B, the confidence delta and the second-moment
/// divergence d2 between the domains' W marginals.
struct UniformBoundInputs {
    double r_hat_y_rho = 0.0;  // importance-weighted source risk of g
    double r_hat_w_t = 0.0;    // target PI risk of f
    std::size_t m = 1, n = 1;  // source / target sample counts
    std::size_t d = 1, d_prime = 1;  // capacity surrogates for the g / f classes
    std::size_t d_w = 1;       // PI dimension
    double big_m = 1.0;        // Lipschitz constant of g
    double big_b = 1.0;        // loss bound
    double delta = 0.05;
    double d2 = 1.0;
};

/// The four additive terms; `total` upper-bounds half the target risk,
/// R_T(h)/2, with probability 1 - delta.
struct UniformBoundBreakdown {
    double weighted_source_risk_term = 0.0;  // r_hat_y_rho
    double target_pi_risk_term = 0.0;        // M^2 * r_hat_w_t
    double source_complexity_term = 0.0;     // 2^{5/4} sqrt(d2) ((d log(2me/d) + log(4/delta))/m)^{3/8}
    double target_complexity_term = 0.0;     // d_w B M^2 (sqrt(2 d' log(en/d')/n) + sqrt(log(d_w/delta)/(2n)))
    double total = 0.0;
};

UniformBoundBreakdown uniform_risk_bound(const UniformBoundInputs& inp);

json uniform_bound_inputs_to_json(const UniformBoundInputs& i);
UniformBoundInputs uniform_bound_inputs_from_json(const json& j);
json uniform_bound_breakdown_to_json(const UniformBoundBreakdown& b);

/// Scalars entering the PAC-Bayes form of the bound: posterior-averaged
/// empirical risks of the two stages, the KL terms of the stage posteriors
/// against their priors, the sup of the density ratio beta_inf, the
/// interpolation parameter gamma in (0,1), the smoothing parameter
/// alpha > 0 and the Lipschitz constant M.
struct PacBayesInputs {
    double expected_weighted_source_risk = 0.0;
    double expected_target_pi_risk = 0.0;
    double kl_g = 0.0, kl_f = 0.0;
    double beta_inf = 1.0;
    double gamma = 0.5;
    double alpha = 1.0;
    double big_m = 1.0;
    std::size_t m = 1, n = 1;
    double delta = 0.05;
};

/// The four additive terms; `total` upper-bounds the posterior-expected
/// target risk with probability 1 - delta.
struct PacBayesBreakdown {
    double source_risk_term = 0.0;        // (2/gamma) E R^{Y,rho}_S
    double source_complexity_term = 0.0;  // beta_inf (KL_g + ln(2/delta)) / (2 gamma (1-gamma) m)
    double target_risk_term = 0.0;        // 2 M^2 alpha/(1-e^{-alpha}) E R^W_T
    double target_complexity_term = 0.0;  // same factor * (KL_f + ln(2/delta)) / (n alpha)
    double total = 0.0;
};

PacBayesBreakdown pacbayes_bound(const PacBayesInputs& inp);

json pacbayes_inputs_to_json(const PacBayesInputs& i);
PacBayesInputs pacbayes_inputs_from_json(const json& j);
json pacbayes_breakdown_to_json(const PacBayesBreakdown& b);

}  // namespace dalupi
