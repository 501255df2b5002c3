#include "dalupi/weighting.hpp"

#include <cmath>

namespace dalupi {

namespace {

std::size_t onehot_index(const double* row, std::size_t n) {
    std::size_t best = 0;
    for (std::size_t j = 1; j < n; ++j)
        if (row[j] > row[best]) best = j;
    return best;
}

}  // namespace

double DensityRatioModel::weight_index(std::size_t w) const {
    if (kind != RatioMethod::ExactDiscrete)
        throw ValidationError("weight_index: not an ExactDiscrete ratio model");
    if (w >= table.size()) throw ValidationError("weight_index: w out of range");
    double r = table[w];
    if (r > clip_max) {
        clip_activations++;
        return clip_max;
    }
    return r;
}

double DensityRatioModel::weight(const std::vector<double>& w) const {
    if (kind == RatioMethod::ExactDiscrete) return weight_index(onehot_index(w.data(), w.size()));
    std::vector<double> p = domain_classifier.predict_one(w);
    double pt = std::min(std::max(p[0], 1e-12), 1.0 - 1e-12);
    double r = pt / (1.0 - pt) * prior_correction;
    if (r > clip_max) {
        clip_activations++;
        return clip_max;
    }
    return r;
}

DensityRatioModel estimate_density_ratio(const Mat& source_w, const Mat& target_w,
                                         RatioMethod method, const TrainConfig& cfg,
                                         double clip_max, bool smoothing) {
    if (source_w.rows == 0 || target_w.rows == 0)
        throw ValidationError("estimate_density_ratio: empty sample set");
    if (source_w.cols != target_w.cols)
        throw ValidationError("estimate_density_ratio: w dimension mismatch");
    if (!(clip_max > 0.0)) throw ValidationError("estimate_density_ratio: clip_max must be > 0");

    DensityRatioModel model;
    model.kind = method;
    model.clip_max = clip_max;
    double ns = static_cast<double>(source_w.rows);
    double nt = static_cast<double>(target_w.rows);

    if (method == RatioMethod::ExactDiscrete) {
        std::size_t card = source_w.cols;
        std::vector<double> cs(card, 0.0), ct(card, 0.0);
        for (std::size_t i = 0; i < source_w.rows; ++i)
            cs[onehot_index(&source_w.a[i * card], card)] += 1.0;
        for (std::size_t i = 0; i < target_w.rows; ++i)
            ct[onehot_index(&target_w.a[i * card], card)] += 1.0;
        model.table.resize(card);
        for (std::size_t w = 0; w < card; ++w) {
            if (smoothing) {
                double s_hat = (cs[w] + 1.0) / (ns + static_cast<double>(card));
                double t_hat = (ct[w] + 1.0) / (nt + static_cast<double>(card));
                model.table[w] = t_hat / s_hat;
            } else {
                if (cs[w] == 0.0 && ct[w] > 0.0)
                    throw IdentificationError(
                        "estimate_density_ratio: w=" + std::to_string(w) +
                        " observed in target but never in source (overlap violated, "
                        "smoothing disabled)");
                // Unseen on both sides: neutral weight.
                model.table[w] = cs[w] == 0.0 ? 1.0 : (ct[w] / nt) / (cs[w] / ns);
            }
        }
        return model;
    }

    // Domain classifier: label 1 for target rows, 0 for source rows.
    Dataset d;
    d.x = Mat(source_w.rows + target_w.rows, source_w.cols);
    d.y = Mat(d.x.rows, 1);
    for (std::size_t i = 0; i < source_w.rows; ++i)
        for (std::size_t j = 0; j < source_w.cols; ++j) d.x.at(i, j) = source_w.at(i, j);
    for (std::size_t i = 0; i < target_w.rows; ++i) {
        for (std::size_t j = 0; j < target_w.cols; ++j)
            d.x.at(source_w.rows + i, j) = target_w.at(i, j);
        d.y.at(source_w.rows + i, 0) = 1.0;
    }
    TrainConfig c = cfg;
    c.loss = TrainLoss::BinaryCrossEntropy;
    Predictor init = Predictor::make_linear(source_w.cols, 1, Head::Sigmoid, cfg.seed);
    model.domain_classifier = fit(init, d, c).model;
    model.prior_correction = ns / nt;
    return model;
}

double weighted_source_risk(const Predictor& g, const Mat& source_w, const Mat& source_y,
                            const DensityRatioModel& rho, TrainLoss loss) {
    if (source_w.rows == 0) throw ValidationError("weighted_source_risk: empty source sample");
    std::vector<double> l = per_sample_loss(g, source_w, source_y, loss);
    double acc = 0.0;
    for (std::size_t i = 0; i < source_w.rows; ++i)
        acc += rho.weight(source_w.row(i)) * l[i];
    return acc / static_cast<double>(source_w.rows);
}

double renyi_d2(const std::vector<double>& target_pw, const std::vector<double>& source_pw) {
    if (target_pw.size() != source_pw.size())
        throw ValidationError("renyi_d2: distribution length mismatch");
    double d2 = 0.0;
    for (std::size_t w = 0; w < target_pw.size(); ++w) {
        double t = target_pw[w], s = source_pw[w];
        if (t <= kSupportEps) continue;
        if (s <= kSupportEps)
            throw IdentificationError("renyi_d2: target mass at w=" + std::to_string(w) +
                                      " where source has none");
        d2 += t * t / s;
    }
    return d2;
}

}  // namespace dalupi
