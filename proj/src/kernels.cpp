#include "dalupi/kernels.hpp"

namespace dalupi::kernels {

namespace {
void check_affine(const Mat& x, const Mat& w, const std::vector<double>& b) {
    if (x.cols != w.cols) throw ValidationError("affine_forward: inner dimension mismatch");
    if (w.rows != b.size()) throw ValidationError("affine_forward: bias size mismatch");
}
void check_same_shape(const Mat& a, const Mat& b, const char* who) {
    if (a.rows != b.rows || a.cols != b.cols) throw ValidationError(std::string(who) + ": shape mismatch");
}
}  // namespace

namespace serial {

Mat affine_forward(const Mat& x, const Mat& w, const std::vector<double>& b) {
    check_affine(x, w, b);
    Mat y(x.rows, w.rows);
    for (std::size_t i = 0; i < x.rows; ++i) {
        for (std::size_t o = 0; o < w.rows; ++o) {
            double acc = b[o];
            for (std::size_t k = 0; k < x.cols; ++k) acc += x.at(i, k) * w.at(o, k);
            y.at(i, o) = acc;
        }
    }
    return y;
}

Mat affine_backward_input(const Mat& dy, const Mat& w) {
    if (dy.cols != w.rows) throw ValidationError("affine_backward_input: dimension mismatch");
    Mat dx(dy.rows, w.cols);
    for (std::size_t i = 0; i < dy.rows; ++i) {
        for (std::size_t k = 0; k < w.cols; ++k) {
            double acc = 0.0;
            for (std::size_t o = 0; o < dy.cols; ++o) acc += dy.at(i, o) * w.at(o, k);
            dx.at(i, k) = acc;
        }
    }
    return dx;
}

void affine_grad(const Mat& x, const Mat& dy, Mat& dw, std::vector<double>& db) {
    if (x.rows != dy.rows) throw ValidationError("affine_grad: batch size mismatch");
    dw = Mat(dy.cols, x.cols);
    db.assign(dy.cols, 0.0);
    for (std::size_t o = 0; o < dy.cols; ++o) {
        for (std::size_t k = 0; k < x.cols; ++k) {
            double acc = 0.0;
            for (std::size_t i = 0; i < x.rows; ++i) acc += dy.at(i, o) * x.at(i, k);
            dw.at(o, k) = acc;
        }
        double acc = 0.0;
        for (std::size_t i = 0; i < x.rows; ++i) acc += dy.at(i, o);
        db[o] = acc;
    }
}

Mat relu_forward(const Mat& x) {
    Mat y(x.rows, x.cols);
    for (std::size_t i = 0; i < x.a.size(); ++i) y.a[i] = x.a[i] > 0.0 ? x.a[i] : 0.0;
    return y;
}

Mat relu_backward(const Mat& x, const Mat& dy) {
    check_same_shape(x, dy, "relu_backward");
    Mat dx(x.rows, x.cols);
    for (std::size_t i = 0; i < x.a.size(); ++i) dx.a[i] = x.a[i] > 0.0 ? dy.a[i] : 0.0;
    return dx;
}

}  // namespace serial

Mat affine_forward(const Mat& x, const Mat& w, const std::vector<double>& b) {
    check_affine(x, w, b);
    Mat y(x.rows, w.rows);
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(x.rows);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        for (std::size_t o = 0; o < w.rows; ++o) {
            double acc = b[o];
            for (std::size_t k = 0; k < x.cols; ++k) acc += x.at(i, k) * w.at(o, k);
            y.at(i, o) = acc;
        }
    }
    return y;
}

Mat affine_backward_input(const Mat& dy, const Mat& w) {
    if (dy.cols != w.rows) throw ValidationError("affine_backward_input: dimension mismatch");
    Mat dx(dy.rows, w.cols);
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(dy.rows);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < w.cols; ++k) {
            double acc = 0.0;
            for (std::size_t o = 0; o < dy.cols; ++o) acc += dy.at(i, o) * w.at(o, k);
            dx.at(i, k) = acc;
        }
    }
    return dx;
}

void affine_grad(const Mat& x, const Mat& dy, Mat& dw, std::vector<double>& db) {
    if (x.rows != dy.rows) throw ValidationError("affine_grad: batch size mismatch");
    dw = Mat(dy.cols, x.cols);
    db.assign(dy.cols, 0.0);
    const std::ptrdiff_t m = static_cast<std::ptrdiff_t>(dy.cols);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t o = 0; o < m; ++o) {
        for (std::size_t k = 0; k < x.cols; ++k) {
            double acc = 0.0;
            for (std::size_t i = 0; i < x.rows; ++i) acc += dy.at(i, o) * x.at(i, k);
            dw.at(o, k) = acc;
        }
        double acc = 0.0;
        for (std::size_t i = 0; i < x.rows; ++i) acc += dy.at(i, o);
        db[o] = acc;
    }
}

Mat relu_forward(const Mat& x) {
    Mat y(x.rows, x.cols);
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(x.a.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) y.a[i] = x.a[i] > 0.0 ? x.a[i] : 0.0;
    return y;
}

Mat relu_backward(const Mat& x, const Mat& dy) {
    check_same_shape(x, dy, "relu_backward");
    Mat dx(x.rows, x.cols);
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(x.a.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) dx.a[i] = x.a[i] > 0.0 ? dy.a[i] : 0.0;
    return dx;
}

}  // namespace dalupi::kernels
