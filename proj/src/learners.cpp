#include "dalupi/learners.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dalupi/kernels.hpp"
#include "dalupi/rng.hpp"

namespace dalupi {

const char* head_name(Head h) {
    switch (h) {
        case Head::Identity: return "identity";
        case Head::Softmax: return "softmax";
        case Head::Sigmoid: return "sigmoid";
    }
    return "?";
}

Head head_from_name(const std::string& s) {
    if (s == "identity") return Head::Identity;
    if (s == "softmax") return Head::Softmax;
    if (s == "sigmoid") return Head::Sigmoid;
    throw IoError("unknown head: " + s);
}

const char* loss_name(TrainLoss l) {
    switch (l) {
        case TrainLoss::SquaredError: return "squared_error";
        case TrainLoss::CrossEntropy: return "cross_entropy";
        case TrainLoss::BinaryCrossEntropy: return "binary_cross_entropy";
    }
    return "?";
}

TrainLoss loss_from_name(const std::string& s) {
    if (s == "squared_error") return TrainLoss::SquaredError;
    if (s == "cross_entropy") return TrainLoss::CrossEntropy;
    if (s == "binary_cross_entropy") return TrainLoss::BinaryCrossEntropy;
    throw IoError("unknown loss: " + s);
}

namespace {

void require_compatible(Head head, TrainLoss loss) {
    bool ok = (loss == TrainLoss::SquaredError &&
               (head == Head::Identity || head == Head::Sigmoid)) ||
              (loss == TrainLoss::CrossEntropy && head == Head::Softmax) ||
              (loss == TrainLoss::BinaryCrossEntropy && head == Head::Sigmoid);
    if (!ok)
        throw TrainingError(std::string("incompatible head/loss pair: ") + head_name(head) +
                            " with " + loss_name(loss));
}

double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    double e = std::exp(z);
    return e / (1.0 + e);
}

void softmax_row(double* z, std::size_t n) {
    double mx = z[0];
    for (std::size_t j = 1; j < n; ++j) mx = std::max(mx, z[j]);
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        z[j] = std::exp(z[j] - mx);
        sum += z[j];
    }
    for (std::size_t j = 0; j < n; ++j) z[j] /= sum;
}

Mat apply_head(Mat z, Head head) {
    switch (head) {
        case Head::Identity: return z;
        case Head::Sigmoid:
            for (double& v : z.a) v = sigmoid(v);
            return z;
        case Head::Softmax:
            for (std::size_t i = 0; i < z.rows; ++i) softmax_row(&z.a[i * z.cols], z.cols);
            return z;
    }
    return z;
}

// Loss of one output row against one target row, on logits.
double row_loss(const double* z, const double* t, std::size_t n, Head head, TrainLoss loss) {
    double acc = 0.0;
    switch (loss) {
        case TrainLoss::SquaredError:
            for (std::size_t j = 0; j < n; ++j) {
                double o = head == Head::Sigmoid ? sigmoid(z[j]) : z[j];
                double d = o - t[j];
                acc += d * d;
            }
            return acc;
        case TrainLoss::CrossEntropy: {
            double mx = z[0];
            for (std::size_t j = 1; j < n; ++j) mx = std::max(mx, z[j]);
            double lse = 0.0, dot = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                lse += std::exp(z[j] - mx);
                dot += t[j] * z[j];
            }
            return mx + std::log(lse) - dot;
        }
        case TrainLoss::BinaryCrossEntropy:
            for (std::size_t j = 0; j < n; ++j)
                acc += std::max(z[j], 0.0) - z[j] * t[j] + std::log1p(std::exp(-std::abs(z[j])));
            return acc;
    }
    return acc;
}

// dLoss/dlogits for one row, written into dz.
void row_grad(const double* z, const double* t, double* dz, std::size_t n, Head head,
              TrainLoss loss) {
    switch (loss) {
        case TrainLoss::SquaredError:
            if (head == Head::Sigmoid) {
                for (std::size_t j = 0; j < n; ++j) {
                    double o = sigmoid(z[j]);
                    dz[j] = 2.0 * (o - t[j]) * o * (1.0 - o);
                }
            } else {
                for (std::size_t j = 0; j < n; ++j) dz[j] = 2.0 * (z[j] - t[j]);
            }
            return;
        case TrainLoss::CrossEntropy: {
            for (std::size_t j = 0; j < n; ++j) dz[j] = z[j];
            softmax_row(dz, n);
            for (std::size_t j = 0; j < n; ++j) dz[j] -= t[j];
            return;
        }
        case TrainLoss::BinaryCrossEntropy:
            for (std::size_t j = 0; j < n; ++j) dz[j] = sigmoid(z[j]) - t[j];
            return;
    }
}

struct ForwardCache {
    Mat pre;      // Mlp: pre-activation, n x hidden
    Mat hid;      // Mlp: rectified, n x hidden
    Mat logits;   // n x out
};

ForwardCache net_forward(const Predictor& p, const Mat& x) {
    ForwardCache c;
    if (p.arch == Arch::Linear) {
        c.logits = kernels::affine_forward(x, p.w1, p.b1);
    } else {
        c.pre = kernels::affine_forward(x, p.w1, p.b1);
        c.hid = kernels::relu_forward(c.pre);
        c.logits = kernels::affine_forward(c.hid, p.w2, p.b2);
    }
    return c;
}

struct Grads {
    Mat dw1, dw2;
    std::vector<double> db1, db2;
};

// dz is dLoss/dlogits already scaled per example; accumulates parameter
// gradients for the whole batch.
Grads net_backward(const Predictor& p, const Mat& x, const ForwardCache& c, const Mat& dz) {
    Grads g;
    if (p.arch == Arch::Linear) {
        kernels::affine_grad(x, dz, g.dw1, g.db1);
    } else {
        kernels::affine_grad(c.hid, dz, g.dw2, g.db2);
        Mat dh = kernels::affine_backward_input(dz, p.w2);
        Mat da = kernels::relu_backward(c.pre, dh);
        kernels::affine_grad(x, da, g.dw1, g.db1);
    }
    return g;
}

void init_matrix(Mat& m, std::size_t fan_in, std::size_t fan_out, Rng& rng) {
    double a = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    for (double& v : m.a) v = rng.uniform(-a, a);
}

}  // namespace

Predictor Predictor::make_linear(std::size_t in, std::size_t out, Head head, std::uint64_t seed) {
    Predictor p;
    p.arch = Arch::Linear;
    p.head = head;
    p.in_dim = in;
    p.out_dim = out;
    p.w1 = Mat(out, in);
    p.b1.assign(out, 0.0);
    Rng rng(seed);
    init_matrix(p.w1, in, out, rng);
    p.validate();
    return p;
}

Predictor Predictor::make_mlp(std::size_t in, std::size_t hidden, std::size_t out, Head head,
                              std::uint64_t seed) {
    if (hidden < 1) throw ValidationError("make_mlp: hidden must be >= 1");
    Predictor p;
    p.arch = Arch::Mlp;
    p.head = head;
    p.in_dim = in;
    p.hidden = hidden;
    p.out_dim = out;
    p.w1 = Mat(hidden, in);
    p.b1.assign(hidden, 0.0);
    p.w2 = Mat(out, hidden);
    p.b2.assign(out, 0.0);
    Rng rng(seed);
    init_matrix(p.w1, in, hidden, rng);
    init_matrix(p.w2, hidden, out, rng);
    p.validate();
    return p;
}

void Predictor::validate() const {
    if (in_dim < 1 || out_dim < 1) throw ValidationError("predictor: dims must be >= 1");
    if (arch == Arch::Linear) {
        if (hidden != 0 || w1.rows != out_dim || w1.cols != in_dim || b1.size() != out_dim)
            throw ValidationError("predictor: linear weight shapes inconsistent");
    } else {
        if (hidden < 1 || w1.rows != hidden || w1.cols != in_dim || b1.size() != hidden ||
            w2.rows != out_dim || w2.cols != hidden || b2.size() != out_dim)
            throw ValidationError("predictor: mlp weight shapes inconsistent");
    }
    for (const Mat* m : {&w1, &w2})
        for (double v : m->a)
            if (!std::isfinite(v)) throw ValidationError("predictor: non-finite weight");
    for (const std::vector<double>* b : {&b1, &b2})
        for (double v : *b)
            if (!std::isfinite(v)) throw ValidationError("predictor: non-finite bias");
}

Mat Predictor::forward_logits(const Mat& x) const {
    if (x.cols != in_dim) throw ValidationError("predictor: input width mismatch");
    return net_forward(*this, x).logits;
}

Mat Predictor::forward(const Mat& x) const { return apply_head(forward_logits(x), head); }

std::vector<double> Predictor::predict_one(const std::vector<double>& x) const {
    Mat m(1, x.size());
    m.a = x;
    return forward(m).row(0);
}

std::size_t Predictor::param_count() const {
    return w1.a.size() + b1.size() + w2.a.size() + b2.size();
}

json model_to_json(const Predictor& p) {
    json j;
    j["version"] = "dalupi-model/1";
    j["architecture"] = p.arch == Arch::Linear ? "linear" : "mlp";
    j["head"] = head_name(p.head);
    j["in_dim"] = p.in_dim;
    j["hidden"] = p.hidden;
    j["out_dim"] = p.out_dim;
    j["w1"] = p.w1.a;
    j["b1"] = p.b1;
    j["w2"] = p.w2.a;
    j["b2"] = p.b2;
    return j;
}

Predictor model_from_json(const json& j) {
    expect_version(j, "dalupi-model/1", "model file");
    Predictor p;
    try {
        std::string arch = j.at("architecture").get<std::string>();
        if (arch == "linear")
            p.arch = Arch::Linear;
        else if (arch == "mlp")
            p.arch = Arch::Mlp;
        else
            throw IoError("unknown architecture: " + arch);
        p.head = head_from_name(j.at("head").get<std::string>());
        p.in_dim = j.at("in_dim").get<std::size_t>();
        p.hidden = j.at("hidden").get<std::size_t>();
        p.out_dim = j.at("out_dim").get<std::size_t>();
        std::size_t r1 = p.arch == Arch::Linear ? p.out_dim : p.hidden;
        p.w1 = Mat(r1, p.in_dim);
        p.w1.a = j.at("w1").get<std::vector<double>>();
        p.b1 = j.at("b1").get<std::vector<double>>();
        if (p.arch == Arch::Mlp) {
            p.w2 = Mat(p.out_dim, p.hidden);
            p.w2.a = j.at("w2").get<std::vector<double>>();
            p.b2 = j.at("b2").get<std::vector<double>>();
        }
        if (p.w1.a.size() != r1 * p.in_dim || p.w2.a.size() != p.w2.rows * p.w2.cols)
            throw IoError("model file: weight array size mismatch");
    } catch (const json::exception& e) {
        throw IoError(std::string("model file: ") + e.what());
    }
    p.validate();
    return p;
}

json train_config_to_json(const TrainConfig& c) {
    json j;
    j["loss"] = loss_name(c.loss);
    j["learning_rate"] = c.learning_rate;
    j["epochs"] = c.epochs;
    j["batch_size"] = c.batch_size;
    j["weight_decay"] = c.weight_decay;
    j["seed"] = c.seed;
    j["early_stop_patience"] = c.early_stop_patience;
    j["validation_fraction"] = c.validation_fraction;
    return j;
}

TrainConfig train_config_from_json(const json& j) {
    TrainConfig c;
    c.loss = loss_from_name(j.value("loss", std::string(loss_name(c.loss))));
    c.learning_rate = j.value("learning_rate", c.learning_rate);
    c.epochs = j.value("epochs", c.epochs);
    c.batch_size = j.value("batch_size", c.batch_size);
    c.weight_decay = j.value("weight_decay", c.weight_decay);
    c.seed = j.value("seed", c.seed);
    c.early_stop_patience = j.value("early_stop_patience", c.early_stop_patience);
    c.validation_fraction = j.value("validation_fraction", c.validation_fraction);
    return c;
}

std::vector<double> per_sample_loss(const Predictor& p, const Mat& x, const Mat& y,
                                    TrainLoss loss) {
    require_compatible(p.head, loss);
    if (x.rows != y.rows || y.cols != p.out_dim)
        throw ValidationError("per_sample_loss: shape mismatch");
    Mat z = p.forward_logits(x);
    std::vector<double> out(x.rows);
    for (std::size_t i = 0; i < x.rows; ++i)
        out[i] = row_loss(&z.a[i * z.cols], &y.a[i * y.cols], z.cols, p.head, loss);
    return out;
}

double mean_loss(const Predictor& p, const Dataset& data, TrainLoss loss) {
    std::vector<double> l = per_sample_loss(p, data.x, data.y, loss);
    double acc = 0.0;
    for (std::size_t i = 0; i < l.size(); ++i)
        acc += (data.weight.empty() ? 1.0 : data.weight[i]) * l[i];
    return l.empty() ? 0.0 : acc / static_cast<double>(l.size());
}

namespace {

struct Split {
    std::vector<std::size_t> train, val;
};

Split make_split(std::size_t n, double val_fraction, Rng rng) {
    Split s;
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    if (val_fraction <= 0.0 || n < 2) {
        s.train = std::move(idx);
        return s;
    }
    for (std::size_t i = n - 1; i > 0; --i) {
        std::size_t j = static_cast<std::size_t>(rng.next_u64() % (i + 1));
        std::swap(idx[i], idx[j]);
    }
    std::size_t nv = static_cast<std::size_t>(std::llround(val_fraction * static_cast<double>(n)));
    nv = std::min(std::max<std::size_t>(nv, 1), n - 1);
    s.val.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(nv));
    s.train.assign(idx.begin() + static_cast<std::ptrdiff_t>(nv), idx.end());
    return s;
}

Mat gather_rows(const Mat& m, const std::vector<std::size_t>& idx, std::size_t lo,
                std::size_t hi) {
    Mat out(hi - lo, m.cols);
    for (std::size_t i = lo; i < hi; ++i)
        for (std::size_t j = 0; j < m.cols; ++j) out.at(i - lo, j) = m.at(idx[i], j);
    return out;
}

void sgd_step(Predictor& p, const Grads& g, double lr, double wd) {
    for (std::size_t i = 0; i < p.w1.a.size(); ++i) p.w1.a[i] -= lr * g.dw1.a[i];
    for (std::size_t i = 0; i < p.b1.size(); ++i) p.b1[i] -= lr * g.db1[i];
    if (p.arch == Arch::Mlp) {
        for (std::size_t i = 0; i < p.w2.a.size(); ++i) p.w2.a[i] -= lr * g.dw2.a[i];
        for (std::size_t i = 0; i < p.b2.size(); ++i) p.b2[i] -= lr * g.db2[i];
    }
    if (wd > 0.0) {
        for (double& v : p.w1.a) v -= lr * wd * v;
        if (p.arch == Arch::Mlp)
            for (double& v : p.w2.a) v -= lr * wd * v;
    }
}

double subset_loss(const Predictor& p, const Dataset& data, const std::vector<std::size_t>& idx,
                   TrainLoss loss) {
    if (idx.empty()) return 0.0;
    Mat x = gather_rows(data.x, idx, 0, idx.size());
    Mat y = gather_rows(data.y, idx, 0, idx.size());
    std::vector<double> l = per_sample_loss(p, x, y, loss);
    double acc = 0.0;
    for (std::size_t i = 0; i < idx.size(); ++i)
        acc += (data.weight.empty() ? 1.0 : data.weight[idx[i]]) * l[i];
    return acc / static_cast<double>(idx.size());
}

}  // namespace

FitResult fit(const Predictor& init, const Dataset& data, const TrainConfig& cfg) {
    init.validate();
    require_compatible(init.head, cfg.loss);
    if (data.x.rows == 0) throw ValidationError("fit: empty dataset");
    if (data.x.rows != data.y.rows || data.x.cols != init.in_dim || data.y.cols != init.out_dim)
        throw ValidationError("fit: data shape mismatch");
    if (!data.weight.empty() && data.weight.size() != data.x.rows)
        throw ValidationError("fit: weight length mismatch");
    if (!(cfg.learning_rate > 0.0)) throw ValidationError("fit: learning_rate must be > 0");
    if (cfg.epochs < 1 || cfg.batch_size < 1)
        throw ValidationError("fit: epochs and batch_size must be >= 1");
    if (cfg.validation_fraction < 0.0 || cfg.validation_fraction >= 1.0)
        throw ValidationError("fit: validation_fraction must be in [0,1)");

    Rng base(cfg.seed);
    Split split = make_split(data.x.rows, cfg.validation_fraction, base.split(2));
    Rng shuffle_rng = base.split(1);

    FitResult res;
    res.model = init;
    Predictor& p = res.model;
    Predictor best = p;
    double best_val = std::numeric_limits<double>::infinity();
    int best_epoch = 0;
    int stale = 0;
    const bool has_val = !split.val.empty();
    std::vector<std::size_t> order = split.train;

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        for (std::size_t i = order.size() - 1; i > 0; --i) {
            std::size_t j = static_cast<std::size_t>(shuffle_rng.next_u64() % (i + 1));
            std::swap(order[i], order[j]);
        }
        double epoch_loss = 0.0;
        for (std::size_t lo = 0; lo < order.size(); lo += static_cast<std::size_t>(cfg.batch_size)) {
            std::size_t hi = std::min(order.size(), lo + static_cast<std::size_t>(cfg.batch_size));
            Mat bx = gather_rows(data.x, order, lo, hi);
            Mat by = gather_rows(data.y, order, lo, hi);
            ForwardCache cache = net_forward(p, bx);
            std::size_t b = hi - lo;
            Mat dz(b, p.out_dim);
            double batch_loss = 0.0;
            for (std::size_t i = 0; i < b; ++i) {
                double w = data.weight.empty() ? 1.0 : data.weight[order[lo + i]];
                const double* z = &cache.logits.a[i * p.out_dim];
                const double* t = &by.a[i * p.out_dim];
                batch_loss += w * row_loss(z, t, p.out_dim, p.head, cfg.loss);
                row_grad(z, t, &dz.a[i * p.out_dim], p.out_dim, p.head, cfg.loss);
                double scale = w / static_cast<double>(b);
                for (std::size_t j = 0; j < p.out_dim; ++j) dz.at(i, j) *= scale;
            }
            if (!std::isfinite(batch_loss))
                throw TrainingError("training diverged: non-finite loss at epoch " +
                                    std::to_string(epoch) + "; learning_rate=" +
                                    std::to_string(cfg.learning_rate) + " is the likely cause");
            epoch_loss += batch_loss;
            Grads g = net_backward(p, bx, cache, dz);
            sgd_step(p, g, cfg.learning_rate, cfg.weight_decay);
        }
        res.train_loss.push_back(order.empty() ? 0.0
                                               : epoch_loss / static_cast<double>(order.size()));
        if (has_val) {
            double vl = subset_loss(p, data, split.val, cfg.loss);
            if (!std::isfinite(vl))
                throw TrainingError("training diverged: non-finite validation loss at epoch " +
                                    std::to_string(epoch) + "; learning_rate=" +
                                    std::to_string(cfg.learning_rate) + " is the likely cause");
            res.val_loss.push_back(vl);
            if (vl < best_val - 1e-12) {
                best_val = vl;
                best = p;
                best_epoch = epoch;
                stale = 0;
            } else {
                stale++;
                if (cfg.early_stop_patience > 0 && stale >= cfg.early_stop_patience) break;
            }
        }
    }
    if (has_val) {
        res.model = best;
        res.best_epoch = best_epoch;
    } else {
        res.best_epoch = static_cast<int>(res.train_loss.size()) - 1;
    }
    return res;
}

double grad_check(const Predictor& p, TrainLoss loss, const std::vector<double>& input,
                  const std::vector<double>& target, double epsilon) {
    if (epsilon < 1e-8 || epsilon > 1e-3)
        throw ValidationError("grad_check: epsilon must be in [1e-8, 1e-3]");
    require_compatible(p.head, loss);
    if (input.size() != p.in_dim || target.size() != p.out_dim)
        throw ValidationError("grad_check: dimension mismatch");

    Mat x(1, p.in_dim);
    x.a = input;
    Mat y(1, p.out_dim);
    y.a = target;

    ForwardCache cache = net_forward(p, x);
    Mat dz(1, p.out_dim);
    row_grad(cache.logits.a.data(), y.a.data(), dz.a.data(), p.out_dim, p.head, loss);
    Grads g = net_backward(p, x, cache, dz);

    Predictor q = p;
    auto numeric = [&](double* param) {
        double keep = *param;
        *param = keep + epsilon;
        double up = per_sample_loss(q, x, y, loss)[0];
        *param = keep - epsilon;
        double dn = per_sample_loss(q, x, y, loss)[0];
        *param = keep;
        return (up - dn) / (2.0 * epsilon);
    };
    auto rel = [](double a, double n) {
        return std::abs(a - n) / std::max(1e-12, std::abs(a) + std::abs(n));
    };

    double worst = 0.0;
    for (std::size_t i = 0; i < q.w1.a.size(); ++i)
        worst = std::max(worst, rel(g.dw1.a[i], numeric(&q.w1.a[i])));
    for (std::size_t i = 0; i < q.b1.size(); ++i)
        worst = std::max(worst, rel(g.db1[i], numeric(&q.b1[i])));
    if (p.arch == Arch::Mlp) {
        for (std::size_t i = 0; i < q.w2.a.size(); ++i)
            worst = std::max(worst, rel(g.dw2.a[i], numeric(&q.w2.a[i])));
        for (std::size_t i = 0; i < q.b2.size(); ++i)
            worst = std::max(worst, rel(g.db2[i], numeric(&q.b2[i])));
    }
    return worst;
}

namespace {

double spectral_norm(const Mat& w) {
    if (w.rows == 0 || w.cols == 0) return 0.0;
    Rng rng(0x5eedfeedULL);
    std::vector<double> v(w.cols);
    double norm = 0.0;
    for (double& e : v) {
        e = rng.uniform(-1.0, 1.0);
        norm += e * e;
    }
    norm = std::sqrt(norm);
    if (norm == 0.0) return 0.0;
    for (double& e : v) e /= norm;
    std::vector<double> u(w.rows);
    double sigma = 0.0;
    for (int it = 0; it < 50; ++it) {
        for (std::size_t i = 0; i < w.rows; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < w.cols; ++j) acc += w.at(i, j) * v[j];
            u[i] = acc;
        }
        sigma = 0.0;
        for (double e : u) sigma += e * e;
        sigma = std::sqrt(sigma);
        if (sigma <= 1e-300) return 0.0;
        for (std::size_t j = 0; j < w.cols; ++j) {
            double acc = 0.0;
            for (std::size_t i = 0; i < w.rows; ++i) acc += w.at(i, j) * u[i];
            v[j] = acc / sigma;
        }
        double vn = 0.0;
        for (double e : v) vn += e * e;
        vn = std::sqrt(vn);
        if (vn <= 1e-300) return 0.0;
        for (double& e : v) e /= vn;
    }
    return sigma;
}

}  // namespace

LipschitzEstimate estimate_lipschitz(const Predictor& p, LipschitzMethod method,
                                     const Mat& probe) {
    p.validate();
    LipschitzEstimate est;
    est.method = method;
    if (method == LipschitzMethod::WeightProductUpper) {
        est.m_hat = spectral_norm(p.w1);
        if (p.arch == Arch::Mlp) est.m_hat *= spectral_norm(p.w2);
        return est;
    }
    if (probe.rows < 2) throw ValidationError("estimate_lipschitz: need at least 2 probe rows");
    if (probe.cols != p.in_dim) throw ValidationError("estimate_lipschitz: probe width mismatch");
    Mat out = p.forward(probe);
    double best = 0.0;
    for (std::size_t i = 0; i < probe.rows; ++i) {
        for (std::size_t j = i + 1; j < probe.rows; ++j) {
            double dx = 0.0, dy = 0.0;
            for (std::size_t k = 0; k < probe.cols; ++k) {
                double d = probe.at(i, k) - probe.at(j, k);
                dx += d * d;
            }
            if (dx <= 1e-24) continue;
            for (std::size_t k = 0; k < out.cols; ++k) {
                double d = out.at(i, k) - out.at(j, k);
                dy += d * d;
            }
            best = std::max(best, std::sqrt(dy / dx));
        }
    }
    est.m_hat = best;
    return est;
}

}  // namespace dalupi
