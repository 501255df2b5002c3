// Compares the OpenMP kernels against the serial reference: wall time per
// op at a few shapes, plus a bitwise equality check on every output.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "dalupi/kernels.hpp"
#include "dalupi/rng.hpp"

using namespace dalupi;

namespace {

Mat random_mat(std::size_t r, std::size_t c, Rng& rng) {
    Mat m(r, c);
    for (double& v : m.a) v = rng.uniform(-1.0, 1.0);
    return m;
}

double time_ms(const std::function<void()>& fn, int reps) {
    fn();  // warm up
    const auto t0 = std::chrono::steady_clock::now();
    for (int i = 0; i < reps; ++i) fn();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

struct Case {
    std::size_t n, in, out;
};

}  // namespace

int main() {
    Rng rng(20240229);
    const std::vector<Case> cases = {{64, 256, 64}, {256, 1024, 128}, {512, 2048, 256}};
    const int reps = 20;
    bool all_equal = true;

    std::printf("%-28s %12s %12s %8s\n", "op (n x in -> out)", "serial ms", "parallel ms",
                "speedup");
    for (const Case& c : cases) {
        Mat x = random_mat(c.n, c.in, rng);
        Mat w = random_mat(c.out, c.in, rng);
        std::vector<double> b(c.out, 0.1);
        Mat dy = random_mat(c.n, c.out, rng);

        const std::string shape =
            std::to_string(c.n) + "x" + std::to_string(c.in) + "->" + std::to_string(c.out);

        {
            const double ts = time_ms([&] { kernels::serial::affine_forward(x, w, b); }, reps);
            const double tp = time_ms([&] { kernels::affine_forward(x, w, b); }, reps);
            all_equal &= kernels::serial::affine_forward(x, w, b) ==
                         kernels::affine_forward(x, w, b);
            std::printf("%-28s %12.3f %12.3f %7.2fx\n", ("affine_forward " + shape).c_str(), ts,
                        tp, ts / tp);
        }
        {
            const double ts =
                time_ms([&] { kernels::serial::affine_backward_input(dy, w); }, reps);
            const double tp = time_ms([&] { kernels::affine_backward_input(dy, w); }, reps);
            all_equal &= kernels::serial::affine_backward_input(dy, w) ==
                         kernels::affine_backward_input(dy, w);
            std::printf("%-28s %12.3f %12.3f %7.2fx\n", ("affine_backward " + shape).c_str(), ts,
                        tp, ts / tp);
        }
        {
            Mat dw_s, dw_p;
            std::vector<double> db_s, db_p;
            const double ts =
                time_ms([&] { kernels::serial::affine_grad(x, dy, dw_s, db_s); }, reps);
            const double tp = time_ms([&] { kernels::affine_grad(x, dy, dw_p, db_p); }, reps);
            all_equal &= dw_s == dw_p && db_s == db_p;
            std::printf("%-28s %12.3f %12.3f %7.2fx\n", ("affine_grad " + shape).c_str(), ts, tp,
                        ts / tp);
        }
        {
            const double ts = time_ms([&] { kernels::serial::relu_forward(x); }, reps);
            const double tp = time_ms([&] { kernels::relu_forward(x); }, reps);
            all_equal &= kernels::serial::relu_forward(x) == kernels::relu_forward(x);
            std::printf("%-28s %12.3f %12.3f %7.2fx\n", ("relu_forward " + shape).c_str(), ts, tp,
                        ts / tp);
        }
    }
    std::printf("\nbitwise agreement serial vs parallel: %s\n", all_equal ? "yes" : "NO");
    return all_equal ? 0 : 1;
}
