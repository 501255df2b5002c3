#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "dalupi/common.hpp"
#include "dalupi/io.hpp"

namespace dalupi {

enum class Domain { Source, Target };

inline const char* domain_name(Domain d) { return d == Domain::Source ? "source" : "target"; }

/// Exact finite joint distribution over (X, W, Y) for a source and a target
/// domain, factored as P(x) * P(w|x) * P(y|w,x). This is the ground truth
/// object behind every oracle: risks, assumption checks and bounds are
/// computed on it by full enumeration, never by sampling.
///
/// W is the privileged variable: observable during training, never at test
/// time. The factorization is the most general one; conditional independence
/// of Y and X given W ("sufficiency") is a checkable property of a world,
/// not a structural constraint.
struct DiscreteWorld {
    std::size_t x_card = 0;
    std::size_t w_card = 0;
    std::size_t y_card = 0;

    std::vector<double> source_px, target_px;  // P(x), length x_card
    Mat source_pw_given_x, target_pw_given_x;  // x_card rows, w_card cols

    /// P(y|w,x) flattened as [w][x][y]: index (w * x_card + x) * y_card + y.
    std::vector<double> source_py_given_wx, target_py_given_wx;

    /// Real embedding of each label index, used by squared-loss risks.
    /// Defaults to k -> k (see default_y_values).
    std::vector<double> y_values;

    static std::vector<double> default_y_values(std::size_t y_card) {
        std::vector<double> v(y_card);
        for (std::size_t k = 0; k < y_card; ++k) v[k] = static_cast<double>(k);
        return v;
    }

    /// Throws ValidationError if any probability row deviates from sum 1 by
    /// more than tol, has negative entries, or shapes are inconsistent.
    void validate(double tol = 1e-9) const;

    const std::vector<double>& px(Domain d) const {
        return d == Domain::Source ? source_px : target_px;
    }
    const Mat& pw_given_x(Domain d) const {
        return d == Domain::Source ? source_pw_given_x : target_pw_given_x;
    }
    double py(Domain d, std::size_t w, std::size_t x, std::size_t y) const {
        const std::vector<double>& t = d == Domain::Source ? source_py_given_wx : target_py_given_wx;
        return t[(w * x_card + x) * y_card + y];
    }
    double& py_ref(Domain d, std::size_t w, std::size_t x, std::size_t y) {
        std::vector<double>& t = d == Domain::Source ? source_py_given_wx : target_py_given_wx;
        return t[(w * x_card + x) * y_card + y];
    }

    /// Marginal P(w) = sum_x P(x) P(w|x).
    std::vector<double> marginal_w(Domain d) const;

    /// Mixture P(y|w) = sum_x P(x|w) P(y|w,x); the zero vector when P(w)=0.
    std::vector<double> py_given_w(Domain d, std::size_t w) const;
};

json world_to_json(const DiscreteWorld& w);
DiscreteWorld world_from_json(const json& j);

enum class Var { X, W, Y };

using Triple = std::array<std::size_t, 3>;  // (x, w, y) indices

/// I.i.d. draws from the factored joint of one domain. Identical seed gives
/// identical output on every platform (counter-based generator, inverse-CDF
/// rows).
std::vector<Triple> sample_world(const DiscreteWorld& world, Domain domain,
                                 std::size_t count, std::uint64_t seed);

/// Normalized histogram of one coordinate. Throws on an empty sample list.
std::vector<double> empirical_marginal(const std::vector<Triple>& samples, Var variable,
                                       std::size_t card);

}  // namespace dalupi
