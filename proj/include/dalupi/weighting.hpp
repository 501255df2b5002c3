#pragma once

#include <cstdint>
#include <vector>

#include "dalupi/learners.hpp"

namespace dalupi {

enum class RatioMethod { ExactDiscrete, ClassifierBased };

/// Importance weights rho(w) ~ T(w)/S(w) relating the two domains over the
/// privileged variable.
///
/// ExactDiscrete treats each w row as a one-hot encoding and builds a
/// frequency table; ClassifierBased trains a domain classifier
/// P(target | w) and converts odds to a ratio with the n_S/n_T prior
/// correction. Query values are clipped at clip_max; every clip bumps
/// clip_activations so callers can report when the cap was active.
struct DensityRatioModel {
    RatioMethod kind = RatioMethod::ExactDiscrete;
    std::vector<double> table;     // ExactDiscrete: ratio per w index
    Predictor domain_classifier;   // ClassifierBased
    double prior_correction = 1.0; // n_S / n_T
    double clip_max = 50.0;
    mutable std::uint64_t clip_activations = 0;

    double weight_index(std::size_t w) const;           // ExactDiscrete
    double weight(const std::vector<double>& w) const;  // either kind
};

/// Estimate rho from samples of W in each domain. ExactDiscrete uses
/// add-one smoothing by default; with smoothing disabled, a w observed in
/// the target but never in the source raises IdentificationError. `cfg`
/// configures the domain classifier (ClassifierBased only).
DensityRatioModel estimate_density_ratio(const Mat& source_w, const Mat& target_w,
                                         RatioMethod method, const TrainConfig& cfg,
                                         double clip_max = 50.0, bool smoothing = true);

/// (1/m) sum_i rho(w_i) * L(g(w_i), y_i).
double weighted_source_risk(const Predictor& g, const Mat& source_w, const Mat& source_y,
                            const DensityRatioModel& rho, TrainLoss loss);

/// Second-moment divergence sum_w T(w)^2 / S(w); >= 1, equal to 1 iff the
/// distributions match. Throws when the target puts mass where the source
/// has none.
double renyi_d2(const std::vector<double>& target_pw, const std::vector<double>& source_pw);

}  // namespace dalupi
