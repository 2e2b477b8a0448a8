#pragma once

#include <optional>
#include <span>
#include <vector>

#include "isoglm/dataset.hpp"
#include "isoglm/isotonic.hpp"
#include "isoglm/transfer.hpp"

namespace isoglm {

enum class BaselineKind { Linear, Logistic, SimAlternating };

// A fitted comparison model. Linear predictions are clamped to [0,1] at
// evaluation time so normalized errors stay comparable; logistic predictions
// are in (0,1) by construction; the SIM model evaluates its fitted transfer.
struct BaselineModel {
    BaselineKind kind;
    LinearDirection direction;
    double intercept = 0.0;
    std::optional<MonotoneFn> transfer;

    double predict(std::span<const double> x) const;
};

// Ordinary least squares with intercept via a rank-revealing QR; falls back
// to a tiny ridge penalty (1e-8, weights only) when the design is
// rank-deficient.
BaselineModel fit_linear(const LabeledDataset& data);

// Full-batch gradient descent on mean cross-entropy, treating real-valued
// targets in [0,1] as Bernoulli means. Steps are halved until the loss does
// not increase; exceeding 20 halvings is an error. loss_trace, when given,
// records the loss after every accepted step.
BaselineModel fit_logistic(const LabeledDataset& data, int iterations = 500, double step = 1.0,
                           std::vector<double>* loss_trace = nullptr);

// Alternating minimization for single index models: fit the best slope-1
// monotone transfer to the current projections, then take a fixed number of
// backtracking gradient steps on the direction with the transfer held fixed.
// outer_errors, when given, records the training squared error after each
// transfer refit (including the final one).
BaselineModel fit_sim_alternating(const LabeledDataset& data, int outer_iterations = 50,
                                  double inner_step = 1.0,
                                  std::vector<double>* outer_errors = nullptr);

// Constant predictor at the training target mean.
BaselineModel fit_train_mean(const LabeledDataset& data);

}  // namespace isoglm
