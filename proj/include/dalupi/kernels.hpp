#pragma once

#include <cstddef>
#include <vector>

#include "dalupi/common.hpp"

namespace dalupi {
namespace kernels {

/// Parallel kernels. Every output element is accumulated serially by the
/// one thread that owns it, so results are bitwise identical to the
/// serial reference for any thread count.

/// y = x * w^T + b, x: n x in, w: out x in, b: out.
Mat affine_forward(const Mat& x, const Mat& w, const std::vector<double>& b);

/// dx = dy * w.
Mat affine_backward_input(const Mat& dy, const Mat& w);

/// dw = dy^T * x (out x in), db = column sums of dy.
void affine_grad(const Mat& x, const Mat& dy, Mat& dw, std::vector<double>& db);

Mat relu_forward(const Mat& x);

/// dx = dy where x > 0, else 0.
Mat relu_backward(const Mat& x, const Mat& dy);

/// Serial reference implementations, kept as the correctness baseline for
/// the parallel kernels and exercised by the same tests and the benchmark.
namespace serial {
Mat affine_forward(const Mat& x, const Mat& w, const std::vector<double>& b);
Mat affine_backward_input(const Mat& dy, const Mat& w);
void affine_grad(const Mat& x, const Mat& dy, Mat& dw, std::vector<double>& db);
Mat relu_forward(const Mat& x);
Mat relu_backward(const Mat& x, const Mat& dy);
}  // namespace serial

}  // namespace kernels
}  // namespace dalupi
