#include "isoglm/experiments.hpp"

#include <chrono>
#include <numeric>
#include <stdexcept>

#include "isoglm/rng.hpp"

namespace isoglm {

namespace {

// Stream tags for seed derivation; every consumer gets its own stream.
constexpr std::uint64_t kDataStream = 0x100;
constexpr std::uint64_t kFoldStream = 0x200;
constexpr std::uint64_t kCvStream = 0x300;
constexpr std::uint64_t kFitSplitStream = 0x400;

CvOptions cv_options_from(std::size_t iterations, double holdout_fraction, std::uint64_t seed,
                          Algorithm reference, std::optional<std::size_t> lpav_cap) {
    CvOptions options;
    options.iterations = iterations;
    options.holdout_fraction = holdout_fraction;
    options.seed = seed;
    options.reference = reference;
    options.lpav_subsample_cap = lpav_cap;
    return options;
}

double elapsed_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

SyntheticExperimentOutcome run_synthetic_experiment(const SyntheticExperimentConfig& config) {
    if (config.repeats == 0)
        throw std::invalid_argument("run_synthetic_experiment: repeats must be positive");
    const auto start = std::chrono::steady_clock::now();

    SyntheticExperimentOutcome outcome;
    outcome.config = config;
    outcome.repeats.reserve(config.repeats);
    for (std::size_t rep = 0; rep < config.repeats; ++rep) {
        const LabeledDataset data =
            generate_synthetic_sim(config.d, config.m, derive_seed(config.seed, kDataStream + rep));
        const FoldPlan plan =
            make_folds(config.m, config.folds, derive_seed(config.seed, kFoldStream + rep));
        outcome.repeats.push_back(run_cv_experiment(
            data, config.algorithms, plan,
            cv_options_from(config.iterations, config.holdout_fraction,
                            derive_seed(config.seed, kCvStream + rep), config.reference,
                            config.lpav_subsample_cap)));
    }

    for (std::size_t ai = 0; ai < config.algorithms.size(); ++ai) {
        RepeatAggregate agg;
        agg.algorithm = config.algorithms[ai];
        for (const ExperimentReport& rep : outcome.repeats) {
            agg.repeat_means.push_back(rep.algorithms[ai].mean_normalized_mse);
            if (ai < rep.diffs_vs_reference.size())
                agg.repeat_diff_means.push_back(rep.diffs_vs_reference[ai].mean);
        }
        agg.mean_normalized_mse = mean_of(agg.repeat_means);
        agg.std_normalized_mse = sample_stddev(agg.repeat_means);
        agg.mean_diff = mean_of(agg.repeat_diff_means);
        agg.std_diff = sample_stddev(agg.repeat_diff_means);
        outcome.aggregates.push_back(std::move(agg));
    }

    outcome.wall_seconds = elapsed_since(start);
    return outcome;
}

TabularExperimentOutcome run_tabular_experiment(const TabularExperimentConfig& config) {
    const auto start = std::chrono::steady_clock::now();

    const LabeledDataset data =
        load_tabular(config.dataset_path, config.target_column, config.scaling);
    const FoldPlan plan =
        make_folds(data.size(), config.folds, derive_seed(config.seed, kFoldStream));

    TabularExperimentOutcome outcome;
    outcome.config = config;
    outcome.rows_used = data.size();
    outcome.rows_rejected = data.meta().rejected_rows;
    outcome.report = run_cv_experiment(
        data, config.algorithms, plan,
        cv_options_from(config.iterations, config.holdout_fraction,
                        derive_seed(config.seed, kCvStream), config.reference,
                        config.lpav_subsample_cap));
    outcome.wall_seconds = elapsed_since(start);
    return outcome;
}

FitOutcome run_fit(const FitConfig& config) {
    const auto start = std::chrono::steady_clock::now();

    const LabeledDataset data =
        load_tabular(config.dataset_path, config.target_column, config.scaling);

    FitOutcome outcome;
    outcome.config = config;

    const bool trace_learner = config.algorithm == Algorithm::LIsotron ||
                               config.algorithm == Algorithm::Isotron ||
                               config.algorithm == Algorithm::GlmTron;
    if (trace_learner) {
        // Split off a selection holdout; train on the rest.
        std::vector<std::size_t> order(data.size());
        std::iota(order.begin(), order.end(), 0);
        Rng rng(derive_seed(config.seed, kFitSplitStream));
        rng.shuffle(order);
        const auto holdout_count = std::max<std::size_t>(
            1, static_cast<std::size_t>(std::llround(config.holdout_fraction *
                                                     static_cast<double>(order.size()))));
        if (holdout_count >= order.size())
            throw std::invalid_argument("run_fit: dataset too small for a holdout split");
        const std::vector<std::size_t> fit_rows(order.begin(),
                                                order.end() - static_cast<long>(holdout_count));
        const std::vector<std::size_t> sel_rows(order.end() - static_cast<long>(holdout_count),
                                                order.end());
        const LabeledDataset fit_data = data.subset(fit_rows);
        const LabeledDataset sel_data = data.subset(sel_rows);
        const std::size_t budget = config.iterations > 0
                                       ? config.iterations
                                       : default_iteration_budget(fit_data.size());
        TrainingTrace trace;
        switch (config.algorithm) {
            case Algorithm::LIsotron: {
                LearnerOptions lo;
                lo.lpav_subsample_cap = config.lpav_subsample_cap;
                lo.subsample_seed = derive_seed(config.seed, kFitSplitStream + 1);
                trace = lisotron_fit(fit_data, budget, lo);
                break;
            }
            case Algorithm::Isotron:
                trace = isotron_fit(fit_data, budget);
                break;
            default:
                trace = glmtron_fit(fit_data, TransferSpec::known(config.glmtron_transfer),
                                    budget);
        }
        HoldoutChoice choice = holdout_select(trace, sel_data);
        outcome.selected_iteration = static_cast<long>(choice.index);
        outcome.train_error = evaluate_hypothesis(choice.hypothesis, data);
        outcome.hypothesis = std::move(choice.hypothesis);
    } else {
        BaselineModel model{BaselineKind::Linear, LinearDirection{{}, std::nullopt}, 0.0,
                            std::nullopt};
        switch (config.algorithm) {
            case Algorithm::Linear:
                model = fit_linear(data);
                break;
            case Algorithm::Logistic:
                model = fit_logistic(data);
                break;
            case Algorithm::Sim:
                model = fit_sim_alternating(data);
                break;
            default:
                model = fit_train_mean(data);
        }
        outcome.train_error = evaluate_baseline(model, data);
        outcome.baseline = std::move(model);
    }

    outcome.wall_seconds = elapsed_since(start);
    return outcome;
}

}  // namespace isoglm
