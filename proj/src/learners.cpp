#include "isoglm/learners.hpp"

#include <cassert>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "isoglm/isotonic.hpp"
#include "isoglm/rng.hpp"

namespace isoglm {

namespace {

void validate(const LabeledDataset& data, std::size_t iterations, const char* op) {
    (void)data;
    if (iterations == 0) throw std::invalid_argument(std::string(op) + ": zero iterations");
}

std::vector<double> projections(const LabeledDataset& data, const std::vector<double>& w) {
    std::vector<double> z(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) z[i] = dot(w, data.row(i));
    return z;
}

double mean_sq_error(const LabeledDataset& data, const std::vector<double>& pred) {
    double s = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const double r = pred[i] - data.target(i);
        s += r * r;
    }
    return s / static_cast<double>(data.size());
}

// w += (1/m) sum (y_i - pred_i) x_i
void residual_update(const LabeledDataset& data, const std::vector<double>& pred,
                     std::vector<double>& w) {
    const double inv_m = 1.0 / static_cast<double>(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        const double r = (data.target(i) - pred[i]) * inv_m;
        const auto x = data.row(i);
        for (std::size_t j = 0; j < w.size(); ++j) w[j] += r * x[j];
    }
}

// Shared loop for the transfer-fitting learners; fit_transfer maps the
// current projections to this iteration's transfer function.
template <typename FitTransfer>
TrainingTrace iterate_transfer_learner(const LabeledDataset& data, std::size_t iterations,
                                       FitTransfer&& fit_transfer) {
    std::vector<double> w(data.dim(), 0.0);
    TrainingTrace trace;
    trace.iterates.reserve(iterations);
    for (std::size_t t = 0; t < iterations; ++t) {
        const std::vector<double> z = projections(data, w);
        MonotoneFn transfer = fit_transfer(z);
        std::vector<double> pred(data.size());
        for (std::size_t i = 0; i < data.size(); ++i) pred[i] = transfer(z[i]);
        trace.iterates.push_back(TraceEntry{
            Hypothesis{LinearDirection{w, std::nullopt}, TransferSpec::fitted(std::move(transfer))},
            mean_sq_error(data, pred)});
        residual_update(data, pred, w);
    }
    return trace;
}

}  // namespace

TrainingTrace glmtron_fit(const LabeledDataset& data, const TransferSpec& transfer,
                          std::size_t iterations) {
    validate(data, iterations, "glmtron_fit");
    if (!transfer.is_known_analytic())
        throw std::invalid_argument("glmtron_fit: transfer must be known-analytic");

    std::vector<double> w(data.dim(), 0.0);
    TrainingTrace trace;
    trace.iterates.reserve(iterations);
    std::vector<double> pred(data.size());
    for (std::size_t t = 0; t < iterations; ++t) {
        for (std::size_t i = 0; i < data.size(); ++i) pred[i] = transfer(dot(w, data.row(i)));
        trace.iterates.push_back(
            TraceEntry{Hypothesis{LinearDirection{w, std::nullopt}, transfer},
                       mean_sq_error(data, pred)});
        residual_update(data, pred, w);
    }
    return trace;
}

TrainingTrace lisotron_fit(const LabeledDataset& data, std::size_t iterations,
                           const LearnerOptions& options) {
    validate(data, iterations, "lisotron_fit");
    const std::size_t cap = options.lpav_subsample_cap.value_or(0);
    Rng subsample_rng(derive_seed(options.subsample_seed, 0x5cab));

    return iterate_transfer_learner(data, iterations, [&](const std::vector<double>& z) {
        std::vector<double> fit_z = z;
        std::vector<double> fit_y = data.targets();
        if (cap > 0 && fit_z.size() > cap) {
            std::vector<std::size_t> idx(fit_z.size());
            std::iota(idx.begin(), idx.end(), 0);
            subsample_rng.shuffle(idx);
            idx.resize(cap);
            std::vector<double> sz(cap), sy(cap);
            for (std::size_t k = 0; k < cap; ++k) {
                sz[k] = fit_z[idx[k]];
                sy[k] = fit_y[idx[k]];
            }
            fit_z.swap(sz);
            fit_y.swap(sy);
        }
        auto instance = RegressionInstance::canonical(std::move(fit_z), std::move(fit_y));
        // build_monotone_fn re-checks monotonicity and the slope bound of
        // every per-iteration fit.
        return build_monotone_fn(lpav(instance, 1.0));
    });
}

TrainingTrace isotron_fit(const LabeledDataset& data, std::size_t iterations) {
    validate(data, iterations, "isotron_fit");
    return iterate_transfer_learner(data, iterations, [&](const std::vector<double>& z) {
        auto instance = RegressionInstance::canonical(z, data.targets());
        return build_step_fn(pav(instance));
    });
}

}  // namespace isoglm
