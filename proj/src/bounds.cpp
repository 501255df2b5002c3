#include "dalupi/bounds.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "dalupi/common.hpp"

namespace dalupi {

namespace {

void require(bool ok, const std::string& msg) {
    if (!ok) throw ValidationError(msg);
}

}  // namespace

UniformBoundBreakdown uniform_risk_bound(const UniformBoundInputs& inp) {
    require(inp.m >= 1 && inp.n >= 1, "sample counts must be >= 1");
    require(inp.d >= 1 && inp.d_prime >= 1 && inp.d_w >= 1,
            "capacity surrogates and d_w must be >= 1");
    require(inp.delta > 0.0 && inp.delta < 1.0, "delta must lie in (0, 1)");
    require(inp.d2 >= 1.0 - 1e-12, "d2 must be >= 1 (it is a second-moment ratio)");
    require(inp.r_hat_y_rho >= 0.0 && inp.r_hat_w_t >= 0.0, "empirical risks must be >= 0");
    require(inp.big_m >= 0.0 && inp.big_b >= 0.0, "M and B must be >= 0");

    const double m = static_cast<double>(inp.m);
    const double n = static_cast<double>(inp.n);
    const double d = static_cast<double>(inp.d);
    const double dp = static_cast<double>(inp.d_prime);
    const double dw = static_cast<double>(inp.d_w);

    const double log_src = std::log(2.0 * m * std::exp(1.0) / d);
    require(log_src > 0.0, "d too large relative to m: log(2me/d) <= 0");
    const double log_tgt = std::log(std::exp(1.0) * n / dp);
    require(log_tgt > 0.0, "d' too large relative to n: log(en/d') <= 0");
    const double log_dw = std::log(dw / inp.delta);
    require(log_dw > 0.0, "log(d_w/delta) <= 0");

    UniformBoundBreakdown out;
    out.weighted_source_risk_term = inp.r_hat_y_rho;
    out.target_pi_risk_term = inp.big_m * inp.big_m * inp.r_hat_w_t;
    const double src_inner = (d * log_src + std::log(4.0 / inp.delta)) / m;
    out.source_complexity_term =
        std::pow(2.0, 1.25) * std::sqrt(inp.d2) * std::pow(src_inner, 3.0 / 8.0);
    const double tgt_inner = std::sqrt(2.0 * dp * log_tgt / n) + std::sqrt(log_dw / (2.0 * n));
    out.target_complexity_term = dw * inp.big_b * inp.big_m * inp.big_m * tgt_inner;
    out.total = out.weighted_source_risk_term + out.target_pi_risk_term +
                out.source_complexity_term + out.target_complexity_term;
    return out;
}

json uniform_bound_inputs_to_json(const UniformBoundInputs& i) {
    return json{{"r_hat_y_rho", i.r_hat_y_rho}, {"r_hat_w_t", i.r_hat_w_t},
                {"m", i.m},                     {"n", i.n},
                {"d", i.d},                     {"d_prime", i.d_prime},
                {"d_w", i.d_w},                 {"big_m", i.big_m},
                {"big_b", i.big_b},             {"delta", i.delta},
                {"d2", i.d2}};
}

UniformBoundInputs uniform_bound_inputs_from_json(const json& j) {
    UniformBoundInputs i;
    i.r_hat_y_rho = j.at("r_hat_y_rho").get<double>();
    i.r_hat_w_t = j.at("r_hat_w_t").get<double>();
    i.m = j.at("m").get<std::size_t>();
    i.n = j.at("n").get<std::size_t>();
    i.d = j.at("d").get<std::size_t>();
    i.d_prime = j.at("d_prime").get<std::size_t>();
    i.d_w = j.at("d_w").get<std::size_t>();
    i.big_m = j.at("big_m").get<double>();
    i.big_b = j.at("big_b").get<double>();
    i.delta = j.at("delta").get<double>();
    i.d2 = j.at("d2").get<double>();
    return i;
}

json uniform_bound_breakdown_to_json(const UniformBoundBreakdown& b) {
    return json{{"weighted_source_risk_term", b.weighted_source_risk_term},
                {"target_pi_risk_term", b.target_pi_risk_term},
                {"source_complexity_term", b.source_complexity_term},
                {"target_complexity_term", b.target_complexity_term},
                {"total", b.total}};
}

PacBayesBreakdown pacbayes_bound(const PacBayesInputs& inp) {
    require(inp.gamma > 0.0 && inp.gamma < 1.0, "gamma must lie in (0, 1)");
    require(inp.alpha > 0.0, "alpha must be > 0");
    require(inp.m >= 1 && inp.n >= 1, "sample counts must be >= 1");
    require(inp.delta > 0.0 && inp.delta < 1.0, "delta must lie in (0, 1)");
    require(inp.kl_g >= 0.0 && inp.kl_f >= 0.0, "KL divergences must be >= 0");
    require(inp.expected_weighted_source_risk >= 0.0 && inp.expected_target_pi_risk >= 0.0,
            "expected risks must be >= 0");
    require(inp.beta_inf >= 0.0, "beta_inf must be >= 0");
    require(inp.big_m >= 0.0, "M must be >= 0");

    const double m = static_cast<double>(inp.m);
    const double n = static_cast<double>(inp.n);
    const double ln_2_delta = std::log(2.0 / inp.delta);
    // alpha / (1 - e^{-alpha}) computed via expm1 for small-alpha stability.
    const double alpha_factor = inp.alpha / (-std::expm1(-inp.alpha));
    const double target_factor = 2.0 * inp.big_m * inp.big_m * alpha_factor;

    PacBayesBreakdown out;
    out.source_risk_term = (2.0 / inp.gamma) * inp.expected_weighted_source_risk;
    out.source_complexity_term =
        inp.beta_inf * (inp.kl_g + ln_2_delta) / (2.0 * inp.gamma * (1.0 - inp.gamma) * m);
    out.target_risk_term = target_factor * inp.expected_target_pi_risk;
    out.target_complexity_term = target_factor * (inp.kl_f + ln_2_delta) / (n * inp.alpha);
    out.total = out.source_risk_term + out.source_complexity_term + out.target_risk_term +
                out.target_complexity_term;
    return out;
}

json pacbayes_inputs_to_json(const PacBayesInputs& i) {
    return json{{"expected_weighted_source_risk", i.expected_weighted_source_risk},
                {"expected_target_pi_risk", i.expected_target_pi_risk},
                {"kl_g", i.kl_g},
                {"kl_f", i.kl_f},
                {"beta_inf", i.beta_inf},
                {"gamma", i.gamma},
                {"alpha", i.alpha},
                {"big_m", i.big_m},
                {"m", i.m},
                {"n", i.n},
                {"delta", i.delta}};
}

PacBayesInputs pacbayes_inputs_from_json(const json& j) {
    PacBayesInputs i;
    i.expected_weighted_source_risk = j.at("expected_weighted_source_risk").get<double>();
    i.expected_target_pi_risk = j.at("expected_target_pi_risk").get<double>();
    i.kl_g = j.at("kl_g").get<double>();
    i.kl_f = j.at("kl_f").get<double>();
    i.beta_inf = j.at("beta_inf").get<double>();
    i.gamma = j.at("gamma").get<double>();
    i.alpha = j.at("alpha").get<double>();
    i.big_m = j.at("big_m").get<double>();
    i.m = j.at("m").get<std::size_t>();
    i.n = j.at("n").get<std::size_t>();
    i.delta = j.at("delta").get<double>();
    return i;
}

json pacbayes_breakdown_to_json(const PacBayesBreakdown& b) {
    return json{{"source_risk_term", b.source_risk_term},
                {"source_complexity_term", b.source_complexity_term},
                {"target_risk_term", b.target_risk_term},
                {"target_complexity_term", b.target_complexity_term},
                {"total", b.total}};
}

}  // namespace dalupi
