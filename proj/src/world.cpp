#include "dalupi/world.hpp"

#include <cmath>

#include "dalupi/rng.hpp"

namespace dalupi {

namespace {

void check_row(const double* row, std::size_t n, double tol, const std::string& what) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!(row[i] >= 0.0)) throw ValidationError(what + ": negative or NaN entry");
        sum += row[i];
    }
    if (std::abs(sum - 1.0) > tol)
        throw ValidationError(what + ": row sums to " + std::to_string(sum) + ", not 1");
}

}  // namespace

void DiscreteWorld::validate(double tol) const {
    if (x_card < 1 || w_card < 1 || y_card < 1)
        throw ValidationError("world: cardinalities must be >= 1");
    if (source_px.size() != x_card || target_px.size() != x_card)
        throw ValidationError("world: P(x) length mismatch");
    for (Domain d : {Domain::Source, Domain::Target}) {
        const char* dn = domain_name(d);
        check_row(px(d).data(), x_card, tol, std::string(dn) + " P(x)");
        const Mat& pw = pw_given_x(d);
        if (pw.rows != x_card || pw.cols != w_card)
            throw ValidationError("world: P(w|x) shape mismatch");
        for (std::size_t x = 0; x < x_card; ++x)
            check_row(&pw.a[x * w_card], w_card, tol,
                      std::string(dn) + " P(w|x=" + std::to_string(x) + ")");
        const std::vector<double>& t = d == Domain::Source ? source_py_given_wx : target_py_given_wx;
        if (t.size() != w_card * x_card * y_card)
            throw ValidationError("world: P(y|w,x) size mismatch");
        for (std::size_t w = 0; w < w_card; ++w)
            for (std::size_t x = 0; x < x_card; ++x)
                check_row(&t[(w * x_card + x) * y_card], y_card, tol,
                          std::string(dn) + " P(y|w=" + std::to_string(w) +
                              ",x=" + std::to_string(x) + ")");
    }
    if (y_values.size() != y_card) throw ValidationError("world: y_values length != y_card");
}

std::vector<double> DiscreteWorld::marginal_w(Domain d) const {
    std::vector<double> pw(w_card, 0.0);
    const std::vector<double>& p_x = px(d);
    const Mat& pwx = pw_given_x(d);
    for (std::size_t x = 0; x < x_card; ++x)
        for (std::size_t w = 0; w < w_card; ++w) pw[w] += p_x[x] * pwx.at(x, w);
    return pw;
}

std::vector<double> DiscreteWorld::py_given_w(Domain d, std::size_t w) const {
    // P(y|w) = sum_x P(x|w) P(y|w,x) with P(x|w) = P(x)P(w|x)/P(w).
    std::vector<double> out(y_card, 0.0);
    const std::vector<double>& p_x = px(d);
    const Mat& pwx = pw_given_x(d);
    double pw = 0.0;
    for (std::size_t x = 0; x < x_card; ++x) pw += p_x[x] * pwx.at(x, w);
    if (pw <= kSupportEps) return out;
    for (std::size_t x = 0; x < x_card; ++x) {
        double pxw = p_x[x] * pwx.at(x, w) / pw;
        if (pxw <= 0.0) continue;
        for (std::size_t y = 0; y < y_card; ++y) out[y] += pxw * py(d, w, x, y);
    }
    return out;
}

json world_to_json(const DiscreteWorld& w) {
    json j;
    j["version"] = "dalupi-world/1";
    j["x_card"] = w.x_card;
    j["w_card"] = w.w_card;
    j["y_card"] = w.y_card;
    j["y_values"] = w.y_values;
    j["source_px"] = w.source_px;
    j["target_px"] = w.target_px;
    j["source_pw_given_x"] = mat_to_json(w.source_pw_given_x);
    j["target_pw_given_x"] = mat_to_json(w.target_pw_given_x);
    j["source_py_given_wx"] = w.source_py_given_wx;
    j["target_py_given_wx"] = w.target_py_given_wx;
    return j;
}

DiscreteWorld world_from_json(const json& j) {
    expect_version(j, "dalupi-world/1", "world file");
    DiscreteWorld w;
    try {
        w.x_card = j.at("x_card").get<std::size_t>();
        w.w_card = j.at("w_card").get<std::size_t>();
        w.y_card = j.at("y_card").get<std::size_t>();
        w.y_values = j.at("y_values").get<std::vector<double>>();
        w.source_px = j.at("source_px").get<std::vector<double>>();
        w.target_px = j.at("target_px").get<std::vector<double>>();
        w.source_pw_given_x = mat_from_json(j.at("source_pw_given_x"), w.w_card, "source_pw_given_x");
        w.target_pw_given_x = mat_from_json(j.at("target_pw_given_x"), w.w_card, "target_pw_given_x");
        w.source_py_given_wx = j.at("source_py_given_wx").get<std::vector<double>>();
        w.target_py_given_wx = j.at("target_py_given_wx").get<std::vector<double>>();
    } catch (const json::exception& e) {
        throw IoError(std::string("world file: ") + e.what());
    }
    w.validate();
    return w;
}

std::vector<Triple> sample_world(const DiscreteWorld& world, Domain domain,
                                 std::size_t count, std::uint64_t seed) {
    world.validate();
    Rng rng(seed);
    const std::vector<double>& p_x = world.px(domain);
    const Mat& pwx = world.pw_given_x(domain);
    std::vector<Triple> out;
    out.reserve(count);
    std::vector<double> row_y(world.y_card);
    for (std::size_t i = 0; i < count; ++i) {
        std::size_t x = rng.categorical(p_x);
        std::size_t w = rng.categorical(pwx.row(x));
        for (std::size_t y = 0; y < world.y_card; ++y) row_y[y] = world.py(domain, w, x, y);
        std::size_t y = rng.categorical(row_y);
        out.push_back({x, w, y});
    }
    return out;
}

std::vector<double> empirical_marginal(const std::vector<Triple>& samples, Var variable,
                                       std::size_t card) {
    if (samples.empty()) throw ValidationError("empirical_marginal: empty sample list");
    std::vector<double> h(card, 0.0);
    std::size_t k = variable == Var::X ? 0 : variable == Var::W ? 1 : 2;
    for (const Triple& t : samples) {
        if (t[k] >= card) throw ValidationError("empirical_marginal: index out of range");
        h[t[k]] += 1.0;
    }
    for (double& v : h) v /= static_cast<double>(samples.size());
    return h;
}

}  // namespace dalupi
