#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "bald/lorentzian.hpp"

using namespace bald;

namespace {

std::vector<double> dense_offsets() {
    std::vector<double> offs;
    for (int k = 0; k <= 80; ++k) offs.push_back(-10.0 + 0.25 * k);
    return offs;
}

// Ground-truth parameter vector for the default pools, packed per layout:
// water amp/width/center, then apt, noe, mt amp/width.
Eigen::VectorXd truth() {
    Eigen::VectorXd p(9);
    p << 0.80, 3.0, 0.05, 0.06, 2.0, 0.10, 3.0, 0.07, 22.0;
    return p;
}

}  // namespace

TEST_CASE("default pools expose the expected parameter layout") {
    const auto pools = default_pools();
    REQUIRE(pools.size() == 4);
    CHECK(pools[0].name == "water");
    CHECK(pools[1].center == 3.5);
    CHECK(pools[2].center == -3.5);
    CHECK(pools[3].center == -2.5);
    CHECK(pools[0].center_tol == 1.0);  // only water floats
    CHECK(pools[1].center_tol == 0.0);

    const PoolLayout layout = param_layout(pools);
    CHECK(layout.n_params == 9);
    CHECK(layout.amp_index == std::vector<int>{0, 3, 5, 7});
    CHECK(layout.width_index == std::vector<int>{1, 4, 6, 8});
    CHECK(layout.center_index == std::vector<int>{2, -1, -1, -1});

    const Eigen::VectorXd init = initial_params(pools);
    CHECK(init[0] == 0.9);
    CHECK(init[1] == 1.0);
    CHECK(init[2] == 0.0);
    CHECK(init[8] == 20.0);  // broad MT start

    Eigen::VectorXd lo, hi;
    param_bounds(pools, lo, hi);
    CHECK(lo[0] == 0.0);
    CHECK(hi[0] == 1.0);
    CHECK(lo[1] == 0.2);
    CHECK(hi[1] == 100.0);
    CHECK(lo[2] == -1.0);
    CHECK(hi[2] == 1.0);
}

TEST_CASE("the forward model is one minus a sum of lorentzian dips") {
    std::vector<PoolSpec> one{{"water", 0.0, 1.0, 0.0, 1.0, 0.2, 100.0, 0.9, 1.0}};
    Eigen::VectorXd p(3);
    p << 0.8, 3.0, 0.0;

    const std::vector<double> offs{0.0, 1.5, -1.5, 100.0};
    const Eigen::VectorXd z = lorentzian_model(one, p, offs);
    CHECK(z[0] == doctest::Approx(1.0 - 0.8).epsilon(1e-15));
    // At half width the dip is at half depth: L = 2.25 / (2.25 + 2.25).
    CHECK(z[1] == doctest::Approx(1.0 - 0.4).epsilon(1e-15));
    CHECK(z[2] == doctest::Approx(z[1]).epsilon(1e-15));
    CHECK(z[3] == doctest::Approx(1.0).epsilon(1e-4));  // far tail
}

TEST_CASE("the analytic jacobian matches central differences") {
    const auto pools = default_pools();
    const std::vector<double> offs = dense_offsets();
    const Eigen::VectorXd p = truth();

    const Eigen::MatrixXd J = lorentzian_jacobian(pools, p, offs);
    double worst = 0.0;
    for (int j = 0; j < p.size(); ++j) {
        const double h = 1e-6 * std::max(1.0, std::abs(p[j]));
        Eigen::VectorXd pp = p, pm = p;
        pp[j] += h;
        pm[j] -= h;
        const Eigen::VectorXd num =
            (lorentzian_model(pools, pp, offs) - lorentzian_model(pools, pm, offs)) /
            (2.0 * h);
        for (Eigen::Index i = 0; i < num.size(); ++i) {
            const double denom = std::max(1.0, std::abs(J(i, j)));
            worst = std::max(worst, std::abs(J(i, j) - num[i]) / denom);
        }
    }
    CHECK(worst <= 1e-5);
}

TEST_CASE("a noiseless spectrum refits to its own parameters") {
    const auto pools = default_pools();
    const std::vector<double> offs = dense_offsets();
    const Eigen::VectorXd p = truth();
    const Eigen::VectorXd zv = lorentzian_model(pools, p, offs);
    const std::vector<double> z(zv.data(), zv.data() + zv.size());

    const FitResult fit = fit_lorentzian(offs, z, pools);
    CHECK(fit.converged);
    const PoolLayout layout = param_layout(pools);
    for (size_t i = 0; i < pools.size(); ++i) {
        const double a_true = p[layout.amp_index[i]];
        const double a_est = fit.params[layout.amp_index[i]];
        CHECK(std::abs(a_est - a_true) <= 0.01 * a_true);
    }
    CHECK(std::abs(fit.params[layout.center_index[0]] - 0.05) <= 0.02);
    CHECK(fit.residual_norm <= 1e-6);
}

TEST_CASE("fitted parameters respect their bounds on hostile data") {
    const auto pools = default_pools();
    const std::vector<double> offs = dense_offsets();
    // Data far outside the model class: a ramp with a notch.
    std::vector<double> z(offs.size());
    for (size_t i = 0; i < z.size(); ++i)
        z[i] = 0.2 + 0.004 * static_cast<double>(i) + (i % 7 == 0 ? -0.1 : 0.0);

    const FitResult fit = fit_lorentzian(offs, z, pools);
    Eigen::VectorXd lo, hi;
    param_bounds(pools, lo, hi);
    for (int j = 0; j < lo.size(); ++j) {
        CHECK(fit.params[j] >= lo[j]);
        CHECK(fit.params[j] <= hi[j]);
    }
    CHECK(fit.iterations >= 1);
}

TEST_CASE("fit inputs are validated") {
    const std::vector<double> offs = dense_offsets();
    std::vector<double> z(offs.size(), 0.5);

    CHECK_THROWS_AS(fit_lorentzian(offs, z, {}), ConfigError);  // no pools

    std::vector<double> short_z(offs.size() - 1, 0.5);
    CHECK_THROWS_AS(fit_lorentzian(offs, short_z), ConfigError);  // length mismatch

    const std::vector<double> few_offs{-1.0, 0.0, 1.0, 2.0};
    const std::vector<double> few_z{0.5, 0.4, 0.5, 0.6};
    CHECK_THROWS_AS(fit_lorentzian(few_offs, few_z), ConfigError);  // too few points

    z[3] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(fit_lorentzian(offs, z), DataError);  // non-finite sample
}

TEST_CASE("pinned centers stay pinned while water's center floats") {
    const auto pools = default_pools();
    const std::vector<double> offs = dense_offsets();
    Eigen::VectorXd p = truth();
    p[2] = 0.4;  // shift the water line well off zero
    const Eigen::VectorXd zv = lorentzian_model(pools, p, offs);
    const std::vector<double> z(zv.data(), zv.data() + zv.size());

    const FitResult fit = fit_lorentzian(offs, z, pools);
    CHECK(fit.converged);
    CHECK(fit.params[2] == doctest::Approx(0.4).epsilon(1e-3));
    // The apt/noe/mt centers are structural constants, not parameters: the
    // packed vector holds amp/width pairs only for them.
    CHECK(fit.params.size() == 9);
}
