#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dalupi/common.hpp"
#include "dalupi/io.hpp"

namespace dalupi {

enum class Arch { Linear, Mlp };
enum class Head { Identity, Softmax, Sigmoid };
enum class TrainLoss { SquaredError, CrossEntropy, BinaryCrossEntropy };

const char* head_name(Head h);
Head head_from_name(const std::string& s);
const char* loss_name(TrainLoss l);
TrainLoss loss_from_name(const std::string& s);

/// Trainable map: either a single affine layer or one rectifier hidden
/// layer, followed by an output head. The supported head/loss pairings are
/// Identity+SquaredError, Sigmoid+SquaredError, Softmax+CrossEntropy and
/// Sigmoid+BinaryCrossEntropy; mixing otherwise throws, which keeps every
/// gradient analytic and finite-difference-checkable.
struct Predictor {
    Arch arch = Arch::Linear;
    Head head = Head::Identity;
    std::size_t in_dim = 0, hidden = 0, out_dim = 0;  // hidden == 0 for Linear

    Mat w1;                   // Linear: out x in; Mlp: hidden x in
    std::vector<double> b1;
    Mat w2;                   // Mlp only: out x hidden
    std::vector<double> b2;

    /// Seeded uniform init in [-a, a], a = sqrt(6 / (fan_in + fan_out));
    /// biases start at zero.
    static Predictor make_linear(std::size_t in, std::size_t out, Head head, std::uint64_t seed);
    static Predictor make_mlp(std::size_t in, std::size_t hidden, std::size_t out, Head head,
                              std::uint64_t seed);

    Mat forward_logits(const Mat& x) const;  // pre-head
    Mat forward(const Mat& x) const;         // post-head
    std::vector<double> predict_one(const std::vector<double>& x) const;

    std::size_t param_count() const;
    void validate() const;
};

json model_to_json(const Predictor& p);
Predictor model_from_json(const json& j);

struct TrainConfig {
    TrainLoss loss = TrainLoss::SquaredError;
    double learning_rate = 0.05;
    int epochs = 100;
    int batch_size = 32;
    double weight_decay = 0.0;            // decoupled, applied to weights only
    std::uint64_t seed = 0;
    int early_stop_patience = 0;          // 0 disables early stopping
    double validation_fraction = 0.0;     // in [0,1); > 0 enables the seeded split
};

json train_config_to_json(const TrainConfig& c);
TrainConfig train_config_from_json(const json& j);

/// Training rows. `weight` is optional per-example importance (empty means
/// all ones); the batch objective is the mean of weight_i * loss_i.
struct Dataset {
    Mat x, y;
    std::vector<double> weight;
};

struct FitResult {
    Predictor model;  // weights of the best validation epoch when a split is used
    std::vector<double> train_loss;
    std::vector<double> val_loss;  // empty when validation_fraction == 0
    int best_epoch = 0;
};

/// Mini-batch SGD from the given initial weights. Deterministic for a
/// fixed cfg.seed: the shuffle, the validation split and every update are
/// driven by the counter-based generator. Throws TrainingError on a
/// non-finite loss.
FitResult fit(const Predictor& init, const Dataset& data, const TrainConfig& cfg);

/// Per-example losses of p on rows (x, y) under the matching loss.
std::vector<double> per_sample_loss(const Predictor& p, const Mat& x, const Mat& y,
                                    TrainLoss loss);

/// Mean of weight_i * loss_i (weights all 1 when empty).
double mean_loss(const Predictor& p, const Dataset& data, TrainLoss loss);

/// Max over all parameters of the relative error between analytic and
/// central-finite-difference gradients on one example.
double grad_check(const Predictor& p, TrainLoss loss, const std::vector<double>& input,
                  const std::vector<double>& target, double epsilon);

enum class LipschitzMethod { WeightProductUpper, EmpiricalPairwise };

struct LipschitzEstimate {
    double m_hat = 0.0;
    LipschitzMethod method = LipschitzMethod::WeightProductUpper;
};

/// WeightProductUpper: product of spectral norms of the weight matrices
/// (power iteration, 50 steps); the rectifier is 1-Lipschitz and the heads
/// are contractions, so this upper-bounds the end-to-end constant.
/// EmpiricalPairwise: max pairwise output/input distance ratio over the
/// probe rows (post-head); requires at least 2 probe rows.
LipschitzEstimate estimate_lipschitz(const Predictor& p, LipschitzMethod method,
                                     const Mat& probe = Mat());

}  // namespace dalupi
