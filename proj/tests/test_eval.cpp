#include <doctest.h>

#include <cmath>
#include <vector>

#include "isoglm/eval.hpp"
#include "test_util.hpp"

using namespace isoglm;

namespace {

Hypothesis constant_hypothesis(std::size_t d, double value) {
    return Hypothesis{LinearDirection{std::vector<double>(d, 0.0), std::nullopt},
                      TransferSpec::fitted(MonotoneFn({0.0}, {value}, Interp::Linear))};
}

}  // namespace

TEST_CASE("empirical squared error basics") {
    const LabeledDataset data(1, {0.0, 0.5, 1.0}, {0.1, 0.5, 0.9});

    // Perfect predictor: transfer clamp-identity shifted by targets = 0.8 t + 0.1.
    const auto trace_like = Hypothesis{
        LinearDirection{{1.0}, std::nullopt},
        TransferSpec::fitted(MonotoneFn({0.0, 1.0}, {0.1, 0.9}, Interp::Linear))};
    CHECK(empirical_sq_error(trace_like, data) == doctest::Approx(0.0));

    const double mean = 0.5;
    CHECK(empirical_sq_error(constant_hypothesis(1, mean), data) ==
          doctest::Approx(target_variance(data)));
}

TEST_CASE("empirical squared error matches a compensated-summation oracle") {
    const auto data = generate_synthetic_sim(40, 700, 17);
    const auto h = constant_hypothesis(40, 0.37);
    std::vector<double> terms(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        const double r = h.predict(data.row(i)) - data.target(i);
        terms[i] = r * r;
    }
    const double oracle = testutil::kahan_sum(terms) / static_cast<double>(data.size());
    CHECK(std::abs(empirical_sq_error(h, data) - oracle) <= 1e-12);
}

TEST_CASE("excess error requires and uses ground truth") {
    const auto data = generate_synthetic_sim(30, 4000, 23);
    const Hypothesis truth{data.meta().ground_truth->direction,
                           data.meta().ground_truth->transfer};
    CHECK(empirical_excess_error(truth, data) == doctest::Approx(0.0));

    // Constant 1/2 against conditional means uniform on {0, 1/2, 1}:
    // expectation (1/3)(1/4 + 0 + 1/4) = 1/6.
    const double excess = empirical_excess_error(constant_hypothesis(30, 0.5), data);
    CHECK(excess == doctest::Approx(1.0 / 6.0).epsilon(0.08));
    CHECK(excess >= 0.0);

    const LabeledDataset plain(1, {0.0, 1.0}, {0.0, 1.0});
    CHECK_THROWS_AS(empirical_excess_error(constant_hypothesis(1, 0.5), plain),
                    std::invalid_argument);
}

TEST_CASE("holdout selection is an exact smallest-index argmin") {
    const LabeledDataset holdout(1, {0.0}, {0.3});

    TrainingTrace trace;
    for (double level : {0.8, 0.3, 0.6})
        trace.iterates.push_back(TraceEntry{constant_hypothesis(1, level), 0.0});
    CHECK(holdout_select(trace, holdout).index == 1);

    TrainingTrace tie;
    for (double level : {0.2, 0.4})  // both at squared distance 0.01
        tie.iterates.push_back(TraceEntry{constant_hypothesis(1, level), 0.0});
    CHECK(holdout_select(tie, holdout).index == 0);

    TrainingTrace single;
    single.iterates.push_back(TraceEntry{constant_hypothesis(1, 0.9), 0.0});
    CHECK(holdout_select(single, holdout).index == 0);

    CHECK_THROWS_AS(holdout_select(TrainingTrace{}, holdout), std::invalid_argument);
}

TEST_CASE("holdout selection beats every other iterate on the holdout") {
    const auto data = generate_synthetic_sim(25, 120, 31);
    const auto plan = make_folds(data.size(), 4, 9);
    const auto holdout = data.subset(plan.test_rows(0));
    const auto train = data.subset(plan.train_rows(0));
    const auto trace = lisotron_fit(train, 12);
    const auto choice = holdout_select(trace, holdout);
    const double chosen = empirical_sq_error(choice.hypothesis, holdout);
    for (const auto& entry : trace.iterates)
        CHECK(chosen <= empirical_sq_error(entry.hypothesis, holdout) + 1e-15);
}

TEST_CASE("train-mean predictor normalizes to one on its own data") {
    const auto data = generate_synthetic_sim(10, 200, 3);
    const auto model = fit_train_mean(data);
    const auto report = evaluate_baseline(model, data);
    CHECK(report.normalized_mse == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("cross-validation of the train-mean predictor is near one") {
    const auto data = generate_synthetic_sim(10, 300, 8);
    const auto plan = make_folds(data.size(), 10, 5);
    CvOptions options;
    options.seed = 99;
    const auto report = run_cv_experiment(data, {Algorithm::TrainMean}, plan, options);
    REQUIRE(report.algorithms.size() == 1);
    for (const auto& fold : report.algorithms[0].folds) {
        CHECK(fold.test_error.normalized_mse > 0.5);
        CHECK(fold.test_error.normalized_mse < 2.0);
    }
    CHECK(report.algorithms[0].mean_normalized_mse == doctest::Approx(1.0).epsilon(0.25));
}

TEST_CASE("cross-validation reports are deterministic and self-consistent") {
    const auto data = generate_synthetic_sim(15, 140, 12);
    const auto plan = make_folds(data.size(), 7, 4);
    CvOptions options;
    options.seed = 1234;
    options.iterations = 6;
    const std::vector<Algorithm> algos{Algorithm::LIsotron, Algorithm::Isotron,
                                       Algorithm::Linear};

    const auto a = run_cv_experiment(data, algos, plan, options);
    const auto b = run_cv_experiment(data, algos, plan, options);
    REQUIRE(a.algorithms.size() == b.algorithms.size());
    for (std::size_t i = 0; i < a.algorithms.size(); ++i) {
        REQUIRE(a.algorithms[i].folds.size() == b.algorithms[i].folds.size());
        for (std::size_t f = 0; f < a.algorithms[i].folds.size(); ++f) {
            CHECK(a.algorithms[i].folds[f].test_error.mse ==
                  b.algorithms[i].folds[f].test_error.mse);
            CHECK(a.algorithms[i].folds[f].test_error.normalized_mse ==
                  b.algorithms[i].folds[f].test_error.normalized_mse);
            CHECK(a.algorithms[i].folds[f].selected_iteration ==
                  b.algorithms[i].folds[f].selected_iteration);
        }
    }

    // Aggregates recompute from the per-fold entries.
    for (const auto& result : a.algorithms) {
        std::vector<double> norm;
        for (const auto& fold : result.folds) norm.push_back(fold.test_error.normalized_mse);
        CHECK(std::abs(result.mean_normalized_mse - mean_of(norm)) <= 1e-12);
        CHECK(std::abs(result.std_normalized_mse - sample_stddev(norm)) <= 1e-12);
    }

    // Pairwise differences: the reference row is exactly zero.
    REQUIRE(!a.diffs_vs_reference.empty());
    const auto& self = a.diffs_vs_reference[0];
    CHECK(self.algorithm == Algorithm::LIsotron);
    CHECK(self.mean == 0.0);
    CHECK(self.stddev == 0.0);
}

TEST_CASE("cross-validation validates its inputs") {
    const auto data = generate_synthetic_sim(10, 60, 1);
    const auto plan = make_folds(data.size(), 5, 2);
    CvOptions options;
    CHECK_THROWS_AS(run_cv_experiment(data, {}, plan, options), std::invalid_argument);
    options.holdout_fraction = 0.9;
    CHECK_THROWS_AS(run_cv_experiment(data, {Algorithm::Linear}, plan, options),
                    std::invalid_argument);
    options.holdout_fraction = 0.2;
    const auto other = generate_synthetic_sim(10, 61, 1);
    CHECK_THROWS_AS(run_cv_experiment(other, {Algorithm::Linear}, plan, options),
                    std::invalid_argument);
}

TEST_CASE("algorithm names round-trip") {
    for (Algorithm a : {Algorithm::LIsotron, Algorithm::Isotron, Algorithm::GlmTron,
                        Algorithm::Linear, Algorithm::Logistic, Algorithm::Sim,
                        Algorithm::TrainMean})
        CHECK(algorithm_by_name(algorithm_name(a)) == a);
    CHECK(!algorithm_by_name("nope").has_value());
}
