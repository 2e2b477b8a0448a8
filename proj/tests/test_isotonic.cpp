#include <doctest.h>

#include <cmath>
#include <vector>

#include "isoglm/isotonic.hpp"
#include "isoglm/rng.hpp"
#include "test_util.hpp"

using namespace isoglm;
using testutil::random_instance;

namespace {

void check_feasible(const IsotonicFit& fit, double tol = 1e-9) {
    for (std::size_t i = 0; i + 1 < fit.yhat.size(); ++i) {
        const double d = fit.yhat[i + 1] - fit.yhat[i];
        CHECK(d >= -tol);
        if (fit.lipschitz_bound)
            CHECK(d <= *fit.lipschitz_bound * (fit.z[i + 1] - fit.z[i]) + tol);
    }
}

double residual_sum(const RegressionInstance& in, const IsotonicFit& fit) {
    double s = 0.0;
    for (std::size_t i = 0; i < in.size(); ++i) s += in.weights[i] * (in.y[i] - fit.yhat[i]);
    return s;
}

}  // namespace

TEST_CASE("pav on already monotone data is the identity") {
    auto in = RegressionInstance::canonical({1, 2, 3}, {0.1, 0.2, 0.3});
    auto fit = pav(in);
    CHECK(fit.yhat[0] == doctest::Approx(0.1));
    CHECK(fit.yhat[1] == doctest::Approx(0.2));
    CHECK(fit.yhat[2] == doctest::Approx(0.3));
    CHECK(fit_objective(in, fit.yhat) == doctest::Approx(0.0));
}

TEST_CASE("pav pools a two-point violation into the average") {
    // argmin (a-1)^2 + (a-0)^2 = 0.5
    auto fit = pav(RegressionInstance::canonical({1, 2}, {1.0, 0.0}));
    CHECK(fit.yhat[0] == doctest::Approx(0.5));
    CHECK(fit.yhat[1] == doctest::Approx(0.5));
}

TEST_CASE("pav pools only the violating prefix") {
    auto fit = pav(RegressionInstance::canonical({1, 2, 3}, {0.5, 0.2, 0.8}));
    CHECK(fit.yhat[0] == doctest::Approx(0.35));
    CHECK(fit.yhat[1] == doctest::Approx(0.35));
    CHECK(fit.yhat[2] == doctest::Approx(0.8));
}

TEST_CASE("pav matches the enumeration oracle with a slack slope bound") {
    Rng rng(20260601);
    for (int rep = 0; rep < 30; ++rep) {
        auto in = random_instance(rng, 2 + rng.below(8));
        auto fit = pav(in);
        auto ref = lpav_reference_oracle(in, 1e12);
        CHECK(std::abs(fit_objective(in, fit.yhat) - fit_objective(in, ref.yhat)) <= 1e-8);
        for (std::size_t i = 0; i < in.size(); ++i)
            CHECK(std::abs(fit.yhat[i] - ref.yhat[i]) <= 1e-7);
    }
}

TEST_CASE("lpav keeps a feasible slope-1 interpolant untouched") {
    auto fit = lpav(RegressionInstance::canonical({0, 1}, {0, 1}), 1.0);
    CHECK(fit.yhat[0] == doctest::Approx(0.0));
    CHECK(fit.yhat[1] == doctest::Approx(1.0));
}

TEST_CASE("lpav activates the slope bound on a steep pair") {
    // With yhat2 = yhat1 + 0.1 pinned, argmin a^2 + (a - 0.9)^2 = 0.45.
    auto in = RegressionInstance::canonical({0, 0.1}, {0, 1});
    auto fit = lpav(in, 1.0);
    CHECK(fit.yhat[0] == doctest::Approx(0.45));
    CHECK(fit.yhat[1] == doctest::Approx(0.55));
    CHECK(fit_objective(in, fit.yhat) == doctest::Approx(0.405));
}

TEST_CASE("lpav forces equal values on tied abscissae") {
    auto fit = lpav(RegressionInstance::canonical({0, 0}, {0, 1}), 1.0);
    CHECK(fit.yhat[0] == doctest::Approx(0.5));
    CHECK(fit.yhat[1] == doctest::Approx(0.5));
}

TEST_CASE("lpav with zero bound returns the weighted mean") {
    auto in = RegressionInstance::canonical({0, 1, 2}, {0.9, 0.1, 0.2});
    auto fit = lpav(in, 0.0);
    for (double v : fit.yhat) CHECK(v == doctest::Approx(0.4));
}

TEST_CASE("lpav rejects bad input") {
    CHECK_THROWS_AS(lpav(RegressionInstance{}, 1.0), std::invalid_argument);
    auto in = RegressionInstance::canonical({0, 1}, {0, 1});
    CHECK_THROWS_AS(lpav(in, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(RegressionInstance::canonical({0, 1}, {0, 2}), std::invalid_argument);
    CHECK_THROWS_AS(RegressionInstance::canonical({0, std::nan("")}, {0, 1}),
                    std::invalid_argument);
    CHECK_THROWS_AS(RegressionInstance::canonical({0, 1}, {0, 1}, {1.0, 0.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(RegressionInstance::canonical({}, {}), std::invalid_argument);
}

TEST_CASE("reference oracle reproduces the hand-solved pair") {
    auto in = RegressionInstance::canonical({0, 0.1}, {0, 1});
    auto ref = lpav_reference_oracle(in, 1.0);
    CHECK(ref.yhat[0] == doctest::Approx(0.45));
    CHECK(ref.yhat[1] == doctest::Approx(0.55));
    CHECK(fit_objective(in, ref.yhat) == doctest::Approx(0.405));

    auto zero_loss = lpav_reference_oracle(RegressionInstance::canonical({0, 1}, {0, 1}), 1.0);
    CHECK(fit_objective(RegressionInstance::canonical({0, 1}, {0, 1}), zero_loss.yhat) ==
          doctest::Approx(0.0));
}

TEST_CASE("lpav matches the reference oracle on random instances") {
    Rng rng(777001);
    for (int rep = 0; rep < 60; ++rep) {
        const std::size_t m = 2 + rng.below(29);
        auto in = random_instance(rng, m, rep % 3 == 0);
        for (double bound : {0.5, 1.0, 3.0}) {
            auto fit = lpav(in, bound);
            auto ref = lpav_reference_oracle(in, bound);
            check_feasible(fit);
            const double got = fit_objective(in, fit.yhat);
            const double want = fit_objective(in, ref.yhat);
            CHECK(got <= want + 1e-6);
            CHECK(got >= want - 1e-6);
        }
    }
}

TEST_CASE("lpav on a seeded five-point instance agrees with the oracle") {
    Rng rng(5);
    auto in = random_instance(rng, 5);
    auto fit = lpav(in, 1.0);
    auto ref = lpav_reference_oracle(in, 1.0);
    CHECK(fit_objective(in, fit.yhat) == doctest::Approx(fit_objective(in, ref.yhat)).epsilon(1e-9));
    for (std::size_t i = 0; i < in.size(); ++i)
        CHECK(fit.yhat[i] == doctest::Approx(ref.yhat[i]).epsilon(1e-7));
}

TEST_CASE("residuals of pav and lpav are weight-balanced and range-bounded") {
    Rng rng(424242);
    for (int rep = 0; rep < 40; ++rep) {
        auto in = random_instance(rng, 2 + rng.below(28), rep % 4 == 0);
        const double lo = *std::min_element(in.y.begin(), in.y.end());
        const double hi = *std::max_element(in.y.begin(), in.y.end());
        for (const auto& fit : {pav(in), lpav(in, 1.0)}) {
            CHECK(std::abs(residual_sum(in, fit)) <= 1e-8);
            for (double v : fit.yhat) {
                CHECK(v >= lo - 1e-9);
                CHECK(v <= hi + 1e-9);
            }
        }
    }
}

TEST_CASE("lpav residuals satisfy the identity-transfer inner-product inequality") {
    // With f the identity, sum (y - yhat)(yhat - z) must be non-negative.
    Rng rng(98765);
    for (int rep = 0; rep < 40; ++rep) {
        auto in = random_instance(rng, 2 + rng.below(28));
        auto fit = lpav(in, 1.0);
        double s = 0.0;
        for (std::size_t i = 0; i < in.size(); ++i)
            s += (in.y[i] - fit.yhat[i]) * (fit.yhat[i] - in.z[i]);
        CHECK(s >= -1e-8);
    }
}

TEST_CASE("lpav is idempotent on its own output") {
    Rng rng(13579);
    for (int rep = 0; rep < 20; ++rep) {
        auto in = random_instance(rng, 2 + rng.below(20));
        auto first = lpav(in, 1.0);
        auto again = lpav(RegressionInstance::canonical(in.z, first.yhat), 1.0);
        for (std::size_t i = 0; i < in.size(); ++i)
            CHECK(std::abs(again.yhat[i] - first.yhat[i]) <= 1e-9);
    }
}

TEST_CASE("pav equals lpav under a huge slope bound") {
    Rng rng(1111);
    for (int rep = 0; rep < 20; ++rep) {
        auto in = random_instance(rng, 2 + rng.below(25));
        auto plain = pav(in);
        auto bounded = lpav(in, 1e12);
        for (std::size_t i = 0; i < in.size(); ++i)
            CHECK(std::abs(plain.yhat[i] - bounded.yhat[i]) <= 1e-8);
    }
}

TEST_CASE("lpav collapse of ties matches explicit weighted points") {
    auto tied = lpav(RegressionInstance::canonical({0, 0, 0.5, 1, 1}, {0.9, 0.3, 0.5, 0.2, 0.8}),
                     1.0);
    auto weighted = lpav(RegressionInstance::canonical({0, 0.5, 1}, {0.6, 0.5, 0.5},
                                                       {2.0, 1.0, 2.0}),
                         1.0);
    CHECK(tied.yhat[0] == doctest::Approx(tied.yhat[1]));
    CHECK(tied.yhat[3] == doctest::Approx(tied.yhat[4]));
    CHECK(tied.yhat[0] == doctest::Approx(weighted.yhat[0]));
    CHECK(tied.yhat[2] == doctest::Approx(weighted.yhat[1]));
    CHECK(tied.yhat[3] == doctest::Approx(weighted.yhat[2]));
}

TEST_CASE("monotone fn interpolates linearly and clamps outside the knots") {
    auto fn = build_monotone_fn(IsotonicFit{{0, 1}, {0, 1}, 1.0});
    CHECK(fn(0.5) == doctest::Approx(0.5));
    CHECK(fn(2.0) == doctest::Approx(1.0));
    CHECK(fn(0.0) == doctest::Approx(0.0));
    CHECK(fn(1.0) == doctest::Approx(1.0));

    auto shallow = build_monotone_fn(IsotonicFit{{0, 0.1}, {0.45, 0.55}, 1.0});
    CHECK(shallow(-1.0) == doctest::Approx(0.45));
    CHECK(shallow(0.05) == doctest::Approx(0.5));
    CHECK(shallow(7.0) == doctest::Approx(0.55));
}

TEST_CASE("monotone fn collapses duplicate knots and validates input") {
    auto fn = build_monotone_fn(IsotonicFit{{0, 0, 1}, {0.2, 0.2, 0.7}, 1.0});
    CHECK(fn.knots_z().size() == 2);
    CHECK(fn(0.0) == doctest::Approx(0.2));

    CHECK_THROWS_AS(build_monotone_fn(IsotonicFit{{0, 0}, {0.2, 0.9}, 1.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(MonotoneFn({0, 1}, {0.9, 0.1}, Interp::Linear), std::invalid_argument);
    CHECK_THROWS_AS(MonotoneFn({1, 0}, {0.1, 0.9}, Interp::Linear), std::invalid_argument);
    CHECK_THROWS_AS(MonotoneFn({0, 1}, {0.1, 1.5}, Interp::Linear), std::invalid_argument);
}

TEST_CASE("lpav-built functions evaluate monotone and 1-Lipschitz everywhere") {
    Rng rng(31415);
    for (int rep = 0; rep < 15; ++rep) {
        auto in = random_instance(rng, 2 + rng.below(25), rep % 2 == 0);
        auto fn = build_monotone_fn(lpav(in, 1.0));
        for (int pair = 0; pair < 50; ++pair) {
            double a = rng.uniform(-2.0, 2.0);
            double b = rng.uniform(-2.0, 2.0);
            if (a > b) std::swap(a, b);
            const double gap = fn(b) - fn(a);
            CHECK(gap >= 0.0);
            CHECK(gap <= (b - a) + 1e-9);
        }
    }
}

TEST_CASE("step fn holds each level up to the midpoint") {
    auto fn = build_step_fn(IsotonicFit{{0, 1, 2}, {0.1, 0.5, 0.9}, std::nullopt});
    CHECK(fn(-5.0) == doctest::Approx(0.1));
    CHECK(fn(0.49) == doctest::Approx(0.1));
    CHECK(fn(0.51) == doctest::Approx(0.5));
    CHECK(fn(1.0) == doctest::Approx(0.5));
    CHECK(fn(1.51) == doctest::Approx(0.9));
    CHECK(fn(9.0) == doctest::Approx(0.9));
    CHECK(fn(1.5) == doctest::Approx(0.9));  // exact midpoint takes the upper level
}

TEST_CASE("evaluation at a knot returns the knot value exactly in both modes") {
    const IsotonicFit fit{{-0.5, 0.25, 2}, {0.2, 0.25, 0.8}, std::nullopt};
    auto lin = MonotoneFn(fit.z, fit.yhat, Interp::Linear);
    auto step = MonotoneFn(fit.z, fit.yhat, Interp::StepMidpoint);
    for (std::size_t i = 0; i < fit.z.size(); ++i) {
        CHECK(lin(fit.z[i]) == fit.yhat[i]);
        CHECK(step(fit.z[i]) == fit.yhat[i]);
    }
}
