#include "isoglm/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "isoglm/rng.hpp"

namespace isoglm {

namespace {

template <typename Predict>
double mean_sq(const LabeledDataset& data, Predict&& predict) {
    double s = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const double r = predict(data.row(i)) - data.target(i);
        s += r * r;
    }
    return s / static_cast<double>(data.size());
}

template <typename Predict>
double mean_sq_vs_truth(const LabeledDataset& data, Predict&& predict) {
    if (!data.meta().ground_truth)
        throw std::invalid_argument("empirical_excess_error: dataset has no ground truth");
    const GroundTruth& gt = *data.meta().ground_truth;
    double s = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto x = data.row(i);
        const double r = predict(x) - gt.conditional_mean(x);
        s += r * r;
    }
    return s / static_cast<double>(data.size());
}

}  // namespace

double empirical_sq_error(const Hypothesis& h, const LabeledDataset& data) {
    return mean_sq(data, [&](auto x) { return h.predict(x); });
}

double empirical_sq_error(const BaselineModel& model, const LabeledDataset& data) {
    return mean_sq(data, [&](auto x) { return model.predict(x); });
}

double empirical_excess_error(const Hypothesis& h, const LabeledDataset& data) {
    return mean_sq_vs_truth(data, [&](auto x) { return h.predict(x); });
}

double empirical_excess_error(const BaselineModel& model, const LabeledDataset& data) {
    return mean_sq_vs_truth(data, [&](auto x) { return model.predict(x); });
}

double target_variance(const LabeledDataset& data) {
    const double m = static_cast<double>(data.size());
    double mean = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) mean += data.target(i);
    mean /= m;
    double var = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const double r = data.target(i) - mean;
        var += r * r;
    }
    return var / m;
}

namespace {

ErrorReport make_report(double mse, const LabeledDataset& data, bool has_excess, double excess) {
    ErrorReport rep;
    rep.mse = mse;
    const double var = target_variance(data);
    rep.normalized_mse = var > 0.0 ? mse / var
                                   : std::numeric_limits<double>::quiet_NaN();
    if (has_excess) rep.excess_error = excess;
    return rep;
}

}  // namespace

ErrorReport evaluate_hypothesis(const Hypothesis& h, const LabeledDataset& data) {
    const bool gt = data.meta().ground_truth.has_value();
    return make_report(empirical_sq_error(h, data), data, gt,
                       gt ? empirical_excess_error(h, data) : 0.0);
}

ErrorReport evaluate_baseline(const BaselineModel& model, const LabeledDataset& data) {
    const bool gt = data.meta().ground_truth.has_value();
    return make_report(empirical_sq_error(model, data), data, gt,
                       gt ? empirical_excess_error(model, data) : 0.0);
}

HoldoutChoice holdout_select(const TrainingTrace& trace, const LabeledDataset& holdout) {
    if (trace.iterates.empty()) throw std::invalid_argument("holdout_select: empty trace");
    std::size_t best = 0;
    double best_err = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < trace.iterates.size(); ++t) {
        const double err = empirical_sq_error(trace.iterates[t].hypothesis, holdout);
        if (err < best_err) {
            best_err = err;
            best = t;
        }
    }
    return HoldoutChoice{trace.iterates[best].hypothesis, best};
}

std::string algorithm_name(Algorithm a) {
    switch (a) {
        case Algorithm::LIsotron: return "lisotron";
        case Algorithm::Isotron: return "isotron";
        case Algorithm::GlmTron: return "glmtron";
        case Algorithm::Linear: return "linear";
        case Algorithm::Logistic: return "logistic";
        case Algorithm::Sim: return "sim";
        case Algorithm::TrainMean: return "mean";
    }
    return "?";
}

std::optional<Algorithm> algorithm_by_name(std::string_view name) {
    for (Algorithm a : {Algorithm::LIsotron, Algorithm::Isotron, Algorithm::GlmTron,
                        Algorithm::Linear, Algorithm::Logistic, Algorithm::Sim,
                        Algorithm::TrainMean})
        if (algorithm_name(a) == name) return a;
    return std::nullopt;
}

std::size_t default_iteration_budget(std::size_t m) {
    const auto budget =
        static_cast<std::size_t>(std::ceil(2.0 * std::sqrt(static_cast<double>(m))));
    return std::clamp<std::size_t>(budget, 1, 500);
}

double mean_of(const std::vector<double>& xs) {
    if (xs.empty()) return 0.0;
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double sample_stddev(const std::vector<double>& xs) {
    if (xs.size() < 2) return 0.0;
    const double mu = mean_of(xs);
    double s = 0.0;
    for (double x : xs) s += (x - mu) * (x - mu);
    return std::sqrt(s / static_cast<double>(xs.size() - 1));
}

namespace {

bool is_trace_learner(Algorithm a) {
    return a == Algorithm::LIsotron || a == Algorithm::Isotron || a == Algorithm::GlmTron;
}

const MonotoneFn* fitted_transfer_of(const Hypothesis& h) {
    return h.transfer.fitted_fn();
}

}  // namespace

ExperimentReport run_cv_experiment(const LabeledDataset& data,
                                   const std::vector<Algorithm>& algorithms,
                                   const FoldPlan& plan, const CvOptions& options) {
    if (algorithms.empty()) throw std::invalid_argument("run_cv_experiment: no algorithms");
    if (plan.assignments.size() != data.size())
        throw std::invalid_argument("run_cv_experiment: fold plan does not match dataset");
    if (!(options.holdout_fraction > 0.0) || options.holdout_fraction > 0.5)
        throw std::invalid_argument("run_cv_experiment: holdout_fraction must be in (0, 0.5]");

    ExperimentReport report;
    report.reference = options.reference;
    report.fold_count = plan.fold_count;
    report.algorithms.resize(algorithms.size());

    for (std::size_t ai = 0; ai < algorithms.size(); ++ai) {
        report.algorithms[ai].algorithm = algorithms[ai];
        report.algorithms[ai].folds.reserve(plan.fold_count);
    }

    for (std::size_t fold = 0; fold < plan.fold_count; ++fold) {
        const std::vector<std::size_t> train_rows = plan.train_rows(fold);
        const std::vector<std::size_t> test_rows = plan.test_rows(fold);
        const LabeledDataset test = data.subset(test_rows);
        const LabeledDataset train = data.subset(train_rows);

        // One inner split per fold, shared by all trace learners so their
        // iterate selection sees identical data.
        std::vector<std::size_t> inner(train_rows.size());
        std::iota(inner.begin(), inner.end(), 0);
        Rng inner_rng(derive_seed(options.seed, 0x1000 + fold));
        inner_rng.shuffle(inner);
        const auto holdout_count = std::max<std::size_t>(
            1, static_cast<std::size_t>(
                   std::llround(options.holdout_fraction * static_cast<double>(inner.size()))));
        if (holdout_count >= inner.size())
            throw std::invalid_argument("run_cv_experiment: training split too small");
        const std::vector<std::size_t> fit_rows(inner.begin(),
                                                inner.end() - static_cast<long>(holdout_count));
        const std::vector<std::size_t> sel_rows(inner.end() - static_cast<long>(holdout_count),
                                                inner.end());
        const LabeledDataset fit_data = train.subset(fit_rows);
        const LabeledDataset sel_data = train.subset(sel_rows);

        const std::size_t budget = options.iterations > 0
                                       ? options.iterations
                                       : default_iteration_budget(fit_data.size());

        for (std::size_t ai = 0; ai < algorithms.size(); ++ai) {
            const Algorithm algo = algorithms[ai];
            AlgorithmCvResult& result = report.algorithms[ai];
            FoldOutcome outcome;
            if (is_trace_learner(algo)) {
                TrainingTrace trace;
                switch (algo) {
                    case Algorithm::LIsotron: {
                        LearnerOptions lo;
                        lo.lpav_subsample_cap = options.lpav_subsample_cap;
                        lo.subsample_seed = derive_seed(options.seed, 0x2000 + fold);
                        trace = lisotron_fit(fit_data, budget, lo);
                        break;
                    }
                    case Algorithm::Isotron:
                        trace = isotron_fit(fit_data, budget);
                        break;
                    default:
                        trace = glmtron_fit(fit_data,
                                            TransferSpec::known(options.glmtron_transfer), budget);
                }
                const HoldoutChoice choice = holdout_select(trace, sel_data);
                outcome.selected_iteration = static_cast<long>(choice.index);
                outcome.test_error = evaluate_hypothesis(choice.hypothesis, test);
                if (fold == 0 && !result.transfer_fold0)
                    if (const MonotoneFn* fn = fitted_transfer_of(choice.hypothesis))
                        result.transfer_fold0 = *fn;
            } else {
                BaselineModel model{BaselineKind::Linear, LinearDirection{{}, std::nullopt}, 0.0,
                                    std::nullopt};
                switch (algo) {
                    case Algorithm::Linear:
                        model = fit_linear(train);
                        break;
                    case Algorithm::Logistic:
                        model = fit_logistic(train, options.logistic_iterations,
                                             options.logistic_step);
                        break;
                    case Algorithm::Sim:
                        model = fit_sim_alternating(train, options.sim_outer_iterations,
                                                    options.sim_inner_step);
                        break;
                    default:
                        model = fit_train_mean(train);
                }
                outcome.test_error = evaluate_baseline(model, test);
                if (fold == 0 && model.transfer) result.transfer_fold0 = model.transfer;
            }
            result.folds.push_back(std::move(outcome));
        }
    }

    for (AlgorithmCvResult& result : report.algorithms) {
        std::vector<double> norm, mse;
        for (const FoldOutcome& f : result.folds) {
            norm.push_back(f.test_error.normalized_mse);
            mse.push_back(f.test_error.mse);
        }
        result.mean_normalized_mse = mean_of(norm);
        result.std_normalized_mse = sample_stddev(norm);
        result.mean_mse = mean_of(mse);
        result.std_mse = sample_stddev(mse);
    }

    const auto ref_it = std::find_if(report.algorithms.begin(), report.algorithms.end(),
                                     [&](const AlgorithmCvResult& r) {
                                         return r.algorithm == options.reference;
                                     });
    if (ref_it != report.algorithms.end()) {
        for (const AlgorithmCvResult& result : report.algorithms) {
            PairwiseDiff diff;
            diff.algorithm = result.algorithm;
            for (std::size_t f = 0; f < result.folds.size(); ++f)
                diff.per_fold.push_back(result.folds[f].test_error.normalized_mse -
                                        ref_it->folds[f].test_error.normalized_mse);
            diff.mean = mean_of(diff.per_fold);
            diff.stddev = sample_stddev(diff.per_fold);
            report.diffs_vs_reference.push_back(std::move(diff));
        }
    }
    return report;
}

}  // namespace isoglm
