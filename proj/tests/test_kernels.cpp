#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <vector>

#include "dalupi/kernels.hpp"
#include "dalupi/rng.hpp"
#include "doctest.h"

using namespace dalupi;

namespace {

Mat random_mat(std::size_t r, std::size_t c, Rng& rng) {
    Mat m(r, c);
    for (double& v : m.a) v = rng.uniform(-2.0, 2.0);
    return m;
}

}  // namespace

TEST_CASE("affine_forward matches a hand computation") {
    Mat x(2, 3);
    x.a = {1, 2, 3, 4, 5, 6};
    Mat w(2, 3);  // out x in
    w.a = {1, 0, -1, 0.5, 0.5, 0.5};
    const std::vector<double> b = {10.0, -1.0};
    const Mat y = kernels::affine_forward(x, w, b);
    REQUIRE(y.rows == 2);
    REQUIRE(y.cols == 2);
    CHECK(y.at(0, 0) == doctest::Approx(1 - 3 + 10));
    CHECK(y.at(0, 1) == doctest::Approx(0.5 * (1 + 2 + 3) - 1));
    CHECK(y.at(1, 0) == doctest::Approx(4 - 6 + 10));
    CHECK(y.at(1, 1) == doctest::Approx(0.5 * (4 + 5 + 6) - 1));
}

TEST_CASE("parallel kernels are bitwise identical to the serial reference") {
    Rng rng(2024);
    // Row counts straddle typical chunk boundaries, including 1 and odd sizes.
    for (std::size_t n : {std::size_t{1}, std::size_t{7}, std::size_t{64}, std::size_t{129}}) {
        const Mat x = random_mat(n, 33, rng);
        const Mat w = random_mat(17, 33, rng);
        std::vector<double> b(17);
        for (double& v : b) v = rng.uniform(-1.0, 1.0);
        const Mat dy = random_mat(n, 17, rng);

        CHECK(kernels::affine_forward(x, w, b) == kernels::serial::affine_forward(x, w, b));
        CHECK(kernels::affine_backward_input(dy, w) ==
              kernels::serial::affine_backward_input(dy, w));

        Mat dw_p, dw_s;
        std::vector<double> db_p, db_s;
        kernels::affine_grad(x, dy, dw_p, db_p);
        kernels::serial::affine_grad(x, dy, dw_s, db_s);
        CHECK(dw_p == dw_s);
        CHECK(db_p == db_s);

        CHECK(kernels::relu_forward(x) == kernels::serial::relu_forward(x));
        CHECK(kernels::relu_backward(x, x) == kernels::serial::relu_backward(x, x));
    }
}

TEST_CASE("affine_grad equals the transpose products") {
    Rng rng(3);
    const Mat x = random_mat(5, 4, rng);
    const Mat dy = random_mat(5, 3, rng);
    Mat dw;
    std::vector<double> db;
    kernels::affine_grad(x, dy, dw, db);
    REQUIRE(dw.rows == 3);
    REQUIRE(dw.cols == 4);
    for (std::size_t o = 0; o < 3; ++o) {
        double col_sum = 0.0;
        for (std::size_t i = 0; i < 5; ++i) col_sum += dy.at(i, o);
        CHECK(db[o] == doctest::Approx(col_sum));
        for (std::size_t j = 0; j < 4; ++j) {
            double acc = 0.0;
            for (std::size_t i = 0; i < 5; ++i) acc += dy.at(i, o) * x.at(i, j);
            CHECK(dw.at(o, j) == doctest::Approx(acc));
        }
    }
}

TEST_CASE("relu forward and backward gate on the input sign") {
    Mat x(1, 4);
    x.a = {-1.0, 0.0, 0.5, 2.0};
    const Mat y = kernels::relu_forward(x);
    CHECK(y.a == std::vector<double>{0.0, 0.0, 0.5, 2.0});
    Mat dy(1, 4);
    dy.a = {1.0, 1.0, 1.0, 1.0};
    const Mat dx = kernels::relu_backward(x, dy);
    CHECK(dx.a == std::vector<double>{0.0, 0.0, 1.0, 1.0});
}

TEST_CASE("shape mismatches are rejected") {
    const Mat x(2, 3), w(4, 5);
    const std::vector<double> b(4, 0.0);
    CHECK_THROWS_AS(kernels::affine_forward(x, w, b), ValidationError);
    CHECK_THROWS_AS(kernels::affine_backward_input(x, w), ValidationError);
    Mat dw;
    std::vector<double> db;
    CHECK_THROWS_AS(kernels::affine_grad(x, w, dw, db), ValidationError);
    CHECK_THROWS_AS(kernels::relu_backward(x, w), ValidationError);
}
