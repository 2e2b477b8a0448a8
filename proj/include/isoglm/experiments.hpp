#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "isoglm/eval.hpp"

namespace isoglm {

// Experiment configurations are fully resolved (defaults applied) before a
// run starts and are embedded verbatim in every emitted report, so a report
// can be reproduced from its own config echo.

struct SyntheticExperimentConfig {
    std::size_t d = 400;
    std::size_t m = 600;
    std::size_t folds = 10;
    std::size_t repeats = 10;
    std::size_t iterations = 0;  // 0 = auto budget
    double holdout_fraction = 0.2;
    std::uint64_t seed = 20260101;
    std::vector<Algorithm> algorithms{Algorithm::LIsotron, Algorithm::Isotron};
    Algorithm reference = Algorithm::LIsotron;
    std::optional<std::size_t> lpav_subsample_cap;
};

struct TabularExperimentConfig {
    std::string dataset_path;
    std::string target_column;
    FeatureScaling scaling = FeatureScaling::UnitBall;
    std::size_t folds = 10;
    std::size_t iterations = 0;
    double holdout_fraction = 0.2;
    std::uint64_t seed = 20260101;
    std::vector<Algorithm> algorithms{Algorithm::LIsotron, Algorithm::GlmTron,
                                      Algorithm::Isotron,  Algorithm::Linear,
                                      Algorithm::Logistic, Algorithm::Sim};
    Algorithm reference = Algorithm::LIsotron;
    std::optional<std::size_t> lpav_subsample_cap;
};

struct FitConfig {
    std::string dataset_path;
    std::string target_column;
    FeatureScaling scaling = FeatureScaling::UnitBall;
    Algorithm algorithm = Algorithm::LIsotron;
    KnownTransfer glmtron_transfer = KnownTransfer::SigmoidRescaled;
    std::size_t iterations = 0;
    double holdout_fraction = 0.2;
    std::uint64_t seed = 20260101;
    std::optional<std::size_t> lpav_subsample_cap;
};

// Per-algorithm aggregate across the repeats of a synthetic run: mean and
// sample standard deviation of the per-repeat fold means, plus the same for
// the per-repeat mean differences against the reference algorithm.
struct RepeatAggregate {
    Algorithm algorithm = Algorithm::LIsotron;
    std::vector<double> repeat_means;
    double mean_normalized_mse = 0.0;
    double std_normalized_mse = 0.0;
    std::vector<double> repeat_diff_means;
    double mean_diff = 0.0;
    double std_diff = 0.0;
};

struct SyntheticExperimentOutcome {
    SyntheticExperimentConfig config;
    std::vector<ExperimentReport> repeats;
    std::vector<RepeatAggregate> aggregates;
    double wall_seconds = 0.0;  // not part of the canonical report
};

struct TabularExperimentOutcome {
    TabularExperimentConfig config;
    ExperimentReport report;
    std::size_t rows_used = 0;
    std::size_t rows_rejected = 0;
    double wall_seconds = 0.0;
};

struct FitOutcome {
    FitConfig config;
    ErrorReport train_error;  // on the full input data
    long selected_iteration = -1;
    std::optional<Hypothesis> hypothesis;
    std::optional<BaselineModel> baseline;
    double wall_seconds = 0.0;
};

// Runs `repeats` independent 10-fold cross validations on freshly generated
// sparse synthetic data. Seed streams are derived per repeat from the config
// seed, so the whole outcome is a pure function of the config.
SyntheticExperimentOutcome run_synthetic_experiment(const SyntheticExperimentConfig& config);

TabularExperimentOutcome run_tabular_experiment(const TabularExperimentConfig& config);

FitOutcome run_fit(const FitConfig& config);

}  // namespace isoglm
