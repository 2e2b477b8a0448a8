#include <doctest.h>

#include <cmath>

#include "isoglm/eval.hpp"
#include "isoglm/learners.hpp"

using namespace isoglm;

namespace {

LabeledDataset one_point() {
    return LabeledDataset(2, {1.0, 0.0}, {1.0});
}

// y = clamp(x) = x on scalar inputs in [0,1]: noiseless, realizable with the
// identity transfer.
LabeledDataset ramp_line(std::size_t m) {
    std::vector<double> xs(m), ys(m);
    for (std::size_t i = 0; i < m; ++i) {
        xs[i] = static_cast<double>(i) / static_cast<double>(m - 1);
        ys[i] = xs[i];
    }
    return LabeledDataset(1, std::move(xs), std::move(ys));
}

double best_train_error(const TrainingTrace& trace) {
    double best = 1.0;
    for (const auto& e : trace.iterates) best = std::min(best, e.train_sq_error);
    return best;
}

}  // namespace

TEST_CASE("glmtron first iterations follow the update formula") {
    const auto data = one_point();
    const auto transfer = TransferSpec::known(KnownTransfer::Ramp);

    const auto trace = glmtron_fit(data, transfer, 2);
    REQUIRE(trace.iteration_count() == 2);
    CHECK(trace.iterates[0].hypothesis.direction.w == std::vector<double>{0.0, 0.0});
    CHECK(trace.iterates[0].hypothesis.predict(data.row(0)) == doctest::Approx(0.5));
    CHECK(trace.iterates[0].train_sq_error == doctest::Approx(0.25));
    CHECK(trace.iterates[1].hypothesis.direction.w[0] == doctest::Approx(0.5));
    CHECK(trace.iterates[1].hypothesis.direction.w[1] == doctest::Approx(0.0));
}

TEST_CASE("glmtron with a single iteration records only the zero hypothesis") {
    const auto data = generate_realizable_glm(3, 20, 1.0, KnownTransfer::SigmoidRescaled, 5);
    const auto transfer = TransferSpec::known(KnownTransfer::SigmoidRescaled);
    const auto trace = glmtron_fit(data, transfer, 1);
    REQUIRE(trace.iteration_count() == 1);
    for (double wi : trace.iterates[0].hypothesis.direction.w) CHECK(wi == 0.0);
    for (std::size_t i = 0; i < data.size(); ++i)
        CHECK(trace.iterates[0].hypothesis.predict(data.row(i)) == doctest::Approx(0.5));
}

TEST_CASE("glmtron rejects invalid requests") {
    const auto data = one_point();
    CHECK_THROWS_AS(glmtron_fit(data, TransferSpec::known(KnownTransfer::Ramp), 0),
                    std::invalid_argument);
    const auto fitted = TransferSpec::fitted(MonotoneFn({0.0}, {0.5}, Interp::Linear));
    CHECK_THROWS_AS(glmtron_fit(data, fitted, 3), std::invalid_argument);
}

TEST_CASE("glmtron reaches the generating model's error on realizable data") {
    const double W = 3.0;
    const std::size_t m = 2000;
    const auto data = generate_realizable_glm(5, m, W, KnownTransfer::SigmoidRescaled, 314);
    const auto transfer = TransferSpec::known(KnownTransfer::SigmoidRescaled);

    const auto budget =
        static_cast<std::size_t>(std::ceil(W * std::sqrt(static_cast<double>(m))));
    const auto trace = glmtron_fit(data, transfer, budget);

    const Hypothesis truth{data.meta().ground_truth->direction,
                           data.meta().ground_truth->transfer};
    const double truth_err = empirical_sq_error(truth, data);
    CHECK(best_train_error(trace) <= truth_err + 0.05);
}

TEST_CASE("lisotron degenerates to the mean fit on its first iteration") {
    const LabeledDataset data(2, {1.0, 0.0, 0.0, 1.0, 1.0, 1.0}, {1.0, 0.5, 0.0});
    const auto trace = lisotron_fit(data, 2);

    const auto& first = trace.iterates[0].hypothesis;
    const double mean = 0.5;
    for (std::size_t i = 0; i < data.size(); ++i)
        CHECK(first.predict(data.row(i)) == doctest::Approx(mean));
    REQUIRE(first.transfer.fitted_fn() != nullptr);
    CHECK(first.transfer.fitted_fn()->knots_z().size() == 1);

    // w^2 = (1/m) sum (y_i - mean) x_i
    std::vector<double> expected(data.dim(), 0.0);
    for (std::size_t i = 0; i < data.size(); ++i)
        for (std::size_t j = 0; j < data.dim(); ++j)
            expected[j] += (data.target(i) - mean) * data.row(i)[j] / 3.0;
    const auto& w2 = trace.iterates[1].hypothesis.direction.w;
    CHECK(w2[0] == doctest::Approx(expected[0]));
    CHECK(w2[1] == doctest::Approx(expected[1]));
}

TEST_CASE("lisotron solves the noiseless scalar ramp") {
    const auto data = ramp_line(60);
    const auto trace = lisotron_fit(data, 50);
    CHECK(best_train_error(trace) <= 1e-3);
}

TEST_CASE("isotron and lisotron agree on the first update") {
    const auto data = generate_synthetic_sim(20, 60, 123);
    const auto iso = isotron_fit(data, 2);
    const auto liso = lisotron_fit(data, 2);
    CHECK(iso.iterates[1].hypothesis.direction.w == liso.iterates[1].hypothesis.direction.w);
}

TEST_CASE("isotron transfers are step functions with in-range predictions") {
    const auto data = generate_synthetic_sim(15, 80, 9);
    const auto trace = isotron_fit(data, 5);
    for (const auto& entry : trace.iterates) {
        REQUIRE(entry.hypothesis.transfer.fitted_fn() != nullptr);
        CHECK(entry.hypothesis.transfer.fitted_fn()->mode() == Interp::StepMidpoint);
        CHECK(entry.train_sq_error >= 0.0);
        CHECK(entry.train_sq_error <= 1.0);
        for (std::size_t i = 0; i < data.size(); ++i) {
            const double p = entry.hypothesis.predict(data.row(i));
            CHECK(p >= 0.0);
            CHECK(p <= 1.0);
        }
    }
}

TEST_CASE("lisotron transfers stay monotone and slope-bounded each iteration") {
    const auto data = generate_synthetic_sim(15, 80, 10);
    const auto trace = lisotron_fit(data, 6);
    for (const auto& entry : trace.iterates) {
        const MonotoneFn* fn = entry.hypothesis.transfer.fitted_fn();
        REQUIRE(fn != nullptr);
        const auto& z = fn->knots_z();
        const auto& v = fn->knots_v();
        for (std::size_t i = 0; i + 1 < z.size(); ++i) {
            CHECK(v[i + 1] >= v[i]);
            CHECK(v[i + 1] - v[i] <= (z[i + 1] - z[i]) + 1e-9);
        }
    }
}

TEST_CASE("traces are bitwise deterministic") {
    const auto data = generate_synthetic_sim(30, 90, 2024);
    const auto a = lisotron_fit(data, 8);
    const auto b = lisotron_fit(data, 8);
    REQUIRE(a.iteration_count() == b.iteration_count());
    for (std::size_t t = 0; t < a.iteration_count(); ++t) {
        CHECK(a.iterates[t].train_sq_error == b.iterates[t].train_sq_error);
        CHECK(a.iterates[t].hypothesis.direction.w == b.iterates[t].hypothesis.direction.w);
    }
}

TEST_CASE("lisotron subsample cap trades accuracy for speed deterministically") {
    const auto data = generate_synthetic_sim(10, 300, 55);
    LearnerOptions options;
    options.lpav_subsample_cap = 64;
    options.subsample_seed = 7;
    const auto capped = lisotron_fit(data, 4, options);
    const auto capped_again = lisotron_fit(data, 4, options);
    for (std::size_t t = 0; t < 4; ++t)
        CHECK(capped.iterates[t].hypothesis.direction.w ==
              capped_again.iterates[t].hypothesis.direction.w);
    for (const auto& entry : capped.iterates)
        CHECK(entry.hypothesis.transfer.fitted_fn()->knots_z().size() <= 64);
}
