#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "isoglm/baselines.hpp"
#include "isoglm/dataset.hpp"
#include "isoglm/learners.hpp"

namespace isoglm {

// Squared error, the same normalized by the target variance of the
// evaluation set (population convention), and the fixed-design excess error
// against known ground truth when available.
struct ErrorReport {
    double mse = 0.0;
    double normalized_mse = 0.0;
    std::optional<double> excess_error;
};

double empirical_sq_error(const Hypothesis& h, const LabeledDataset& data);
double empirical_sq_error(const BaselineModel& model, const LabeledDataset& data);

double empirical_excess_error(const Hypothesis& h, const LabeledDataset& data);
double empirical_excess_error(const BaselineModel& model, const LabeledDataset& data);

// Population variance of the targets.
double target_variance(const LabeledDataset& data);

ErrorReport evaluate_hypothesis(const Hypothesis& h, const LabeledDataset& data);
ErrorReport evaluate_baseline(const BaselineModel& model, const LabeledDataset& data);

// Smallest-index argmin of holdout squared error over the trace.
struct HoldoutChoice {
    Hypothesis hypothesis;
    std::size_t index;
};
HoldoutChoice holdout_select(const TrainingTrace& trace, const LabeledDataset& holdout);

enum class Algorithm { LIsotron, Isotron, GlmTron, Linear, Logistic, Sim, TrainMean };

std::string algorithm_name(Algorithm a);
std::optional<Algorithm> algorithm_by_name(std::string_view name);

struct CvOptions {
    // 0 picks ceil(2 sqrt(m)) from the training split the learner sees,
    // capped at 500.
    std::size_t iterations = 0;
    // Share of each training split withheld for iterate selection; only the
    // trace-producing learners use it.
    double holdout_fraction = 0.2;
    std::uint64_t seed = 0;
    KnownTransfer glmtron_transfer = KnownTransfer::SigmoidRescaled;
    Algorithm reference = Algorithm::LIsotron;
    int logistic_iterations = 500;
    double logistic_step = 1.0;
    int sim_outer_iterations = 50;
    double sim_inner_step = 1.0;
    std::optional<std::size_t> lpav_subsample_cap;
};

std::size_t default_iteration_budget(std::size_t m);

struct FoldOutcome {
    ErrorReport test_error;
    long selected_iteration = -1;  // trace learners only
};

struct AlgorithmCvResult {
    Algorithm algorithm = Algorithm::LIsotron;
    std::vector<FoldOutcome> folds;
    double mean_normalized_mse = 0.0;
    double std_normalized_mse = 0.0;
    double mean_mse = 0.0;
    double std_mse = 0.0;
    // Fitted transfer of fold 0's selected model, for plot output.
    std::optional<MonotoneFn> transfer_fold0;
};

struct PairwiseDiff {
    Algorithm algorithm = Algorithm::LIsotron;
    std::vector<double> per_fold;  // normalized error minus the reference's
    double mean = 0.0;
    double stddev = 0.0;
};

struct ExperimentReport {
    std::vector<AlgorithmCvResult> algorithms;
    std::vector<PairwiseDiff> diffs_vs_reference;
    Algorithm reference = Algorithm::LIsotron;
    std::size_t fold_count = 0;
};

// One full cross-validation pass: per fold, trace learners train on the
// non-test rows minus a seeded inner holdout (used only to pick an iterate),
// baselines train on all non-test rows, and everything is scored on the test
// fold. Deterministic given the plan and options.
ExperimentReport run_cv_experiment(const LabeledDataset& data,
                                   const std::vector<Algorithm>& algorithms,
                                   const FoldPlan& plan, const CvOptions& options);

double mean_of(const std::vector<double>& xs);
double sample_stddev(const std::vector<double>& xs);

}  // namespace isoglm
