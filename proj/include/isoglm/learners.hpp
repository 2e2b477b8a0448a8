#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "isoglm/dataset.hpp"
#include "isoglm/transfer.hpp"

namespace isoglm {

struct TraceEntry {
    Hypothesis hypothesis;
    double train_sq_error;
};

// Every per-iteration hypothesis of a run, in order; hold-out selection picks
// from here.
struct TrainingTrace {
    std::vector<TraceEntry> iterates;

    std::size_t iteration_count() const { return iterates.size(); }
};

struct LearnerOptions {
    // Optional cap on the LPAV instance size inside lisotron_fit: larger
    // instances are fitted on a seeded subsample of the projections. Off by
    // default; the fitted function is still evaluated on every point.
    std::optional<std::size_t> lpav_subsample_cap;
    std::uint64_t subsample_seed = 0;
};

// Known-transfer learner: w starts at zero and moves by the mean residual
// direction, one unit step per iteration. The trace records each hypothesis
// before its update, so entry t holds w^t.
TrainingTrace glmtron_fit(const LabeledDataset& data, const TransferSpec& transfer,
                          std::size_t iterations);

// Unknown-transfer learner: each iteration fits a 1-Lipschitz monotone
// transfer to the current projections (slope bound 1), then applies the same
// mean-residual update.
TrainingTrace lisotron_fit(const LabeledDataset& data, std::size_t iterations,
                           const LearnerOptions& options = {});

// Like lisotron_fit but fits an unconstrained monotone step function each
// iteration, extended piecewise-constant between distinct projections.
TrainingTrace isotron_fit(const LabeledDataset& data, std::size_t iterations);

}  // namespace isoglm
