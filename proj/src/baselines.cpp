#include "isoglm/baselines.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace isoglm {

double BaselineModel::predict(std::span<const double> x) const {
    const double t = dot(direction.w, x) + intercept;
    switch (kind) {
        case BaselineKind::Linear:
            return std::clamp(t, 0.0, 1.0);
        case BaselineKind::Logistic:
            return eval_transfer(KnownTransfer::SigmoidRescaled, t);
        case BaselineKind::SimAlternating:
            return (*transfer)(t);
    }
    throw std::logic_error("BaselineModel: unknown kind");
}

BaselineModel fit_linear(const LabeledDataset& data) {
    const auto m = static_cast<Eigen::Index>(data.size());
    const auto d = static_cast<Eigen::Index>(data.dim());
    Eigen::MatrixXd design(m, d + 1);
    Eigen::VectorXd target(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        const auto x = data.row(static_cast<std::size_t>(i));
        for (Eigen::Index j = 0; j < d; ++j) design(i, j) = x[static_cast<std::size_t>(j)];
        design(i, d) = 1.0;
        target(i) = data.target(static_cast<std::size_t>(i));
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    Eigen::VectorXd beta;
    if (qr.rank() < d + 1) {
        // Ridge fallback, penalty on the weights but not the intercept.
        Eigen::MatrixXd gram = design.transpose() * design;
        for (Eigen::Index j = 0; j < d; ++j) gram(j, j) += 1e-8;
        beta = gram.ldlt().solve(design.transpose() * target);
    } else {
        beta = qr.solve(target);
    }

    BaselineModel model{BaselineKind::Linear,
                        LinearDirection{std::vector<double>(beta.data(), beta.data() + d),
                                        std::nullopt},
                        beta(d), std::nullopt};
    return model;
}

namespace {

double cross_entropy(const LabeledDataset& data, const std::vector<double>& w, double b) {
    double loss = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        double p = eval_transfer(KnownTransfer::SigmoidRescaled, dot(w, data.row(i)) + b);
        p = std::clamp(p, 1e-12, 1.0 - 1e-12);
        const double y = data.target(i);
        loss -= y * std::log(p) + (1.0 - y) * std::log(1.0 - p);
    }
    return loss / static_cast<double>(data.size());
}

}  // namespace

BaselineModel fit_logistic(const LabeledDataset& data, int iterations, double step,
                           std::vector<double>* loss_trace) {
    if (iterations < 1) throw std::invalid_argument("fit_logistic: iterations must be positive");
    if (!(step > 0.0)) throw std::invalid_argument("fit_logistic: step must be positive");

    const std::size_t d = data.dim();
    const double inv_m = 1.0 / static_cast<double>(data.size());
    std::vector<double> w(d, 0.0);
    double b = 0.0;
    double loss = cross_entropy(data, w, b);
    if (loss_trace) loss_trace->push_back(loss);

    std::vector<double> grad(d);
    std::vector<double> w_next(d);
    for (int it = 0; it < iterations; ++it) {
        std::fill(grad.begin(), grad.end(), 0.0);
        double grad_b = 0.0;
        for (std::size_t i = 0; i < data.size(); ++i) {
            const auto x = data.row(i);
            const double p = eval_transfer(KnownTransfer::SigmoidRescaled, dot(w, x) + b);
            const double r = (p - data.target(i)) * inv_m;
            for (std::size_t j = 0; j < d; ++j) grad[j] += r * x[j];
            grad_b += r;
        }
        double gmax = std::abs(grad_b);
        for (double g : grad) gmax = std::max(gmax, std::abs(g));
        if (gmax <= 1e-14) break;

        double s = step;
        bool accepted = false;
        double next = loss;
        for (int halving = 0; halving <= 20; ++halving) {
            for (std::size_t j = 0; j < d; ++j) w_next[j] = w[j] - s * grad[j];
            const double b_next = b - s * grad_b;
            next = cross_entropy(data, w_next, b_next);
            if (std::isfinite(next) && next <= loss) {
                w.swap(w_next);
                b = b_next;
                loss = next;
                accepted = true;
                break;
            }
            s *= 0.5;
        }
        if (!accepted) {
            if (!std::isfinite(next))
                throw std::runtime_error("fit_logistic: non-finite loss after 20 halvings");
            break;  // no step improves the loss: numerically converged
        }
        if (loss_trace) loss_trace->push_back(loss);
    }
    return BaselineModel{BaselineKind::Logistic, LinearDirection{std::move(w), std::nullopt}, b,
                         std::nullopt};
}

namespace {

// Slope of the segment to the left of t; zero outside the knot range. A
// single-knot (constant) transfer reports slope 1 so the direction step can
// escape the all-tied starting point.
double left_slope(const MonotoneFn& u, double t) {
    const auto& z = u.knots_z();
    const auto& v = u.knots_v();
    if (z.size() == 1) return 1.0;
    if (t <= z.front() || t > z.back()) return 0.0;
    const std::size_t hi = static_cast<std::size_t>(
        std::lower_bound(z.begin(), z.end(), t) - z.begin());
    const std::size_t lo = hi == 0 ? 0 : hi - 1;
    return (v[hi] - v[lo]) / (z[hi] - z[lo]);
}

}  // namespace

BaselineModel fit_sim_alternating(const LabeledDataset& data, int outer_iterations,
                                  double inner_step, std::vector<double>* outer_errors) {
    if (outer_iterations < 1)
        throw std::invalid_argument("fit_sim_alternating: iterations must be positive");
    if (!(inner_step > 0.0))
        throw std::invalid_argument("fit_sim_alternating: step must be positive");

    constexpr int kInnerSteps = 10;
    const std::size_t d = data.dim();
    const std::size_t m = data.size();
    const double inv_m = 1.0 / static_cast<double>(m);

    std::vector<double> w(d, 0.0);
    std::vector<double> z(m), z_next(m), grad(d), w_next(d);
    std::optional<MonotoneFn> u;
    double err = 0.0;

    auto project = [&](const std::vector<double>& weights, std::vector<double>& out) {
        for (std::size_t i = 0; i < m; ++i) out[i] = dot(weights, data.row(i));
    };
    auto sq_error = [&](const MonotoneFn& fn, const std::vector<double>& proj) {
        double s = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double r = fn(proj[i]) - data.target(i);
            s += r * r;
        }
        return s * inv_m;
    };

    auto refit_transfer = [&] {
        project(w, z);
        u = build_monotone_fn(lpav(RegressionInstance::canonical(z, data.targets()), 1.0));
        err = sq_error(*u, z);
        if (outer_errors) outer_errors->push_back(err);
    };

    for (int outer = 0; outer < outer_iterations; ++outer) {
        refit_transfer();
        for (int k = 0; k < kInnerSteps; ++k) {
            std::fill(grad.begin(), grad.end(), 0.0);
            for (std::size_t i = 0; i < m; ++i) {
                const double fz = (*u)(z[i]);
                const double c = 2.0 * inv_m * (fz - data.target(i)) * left_slope(*u, z[i]);
                if (c == 0.0) continue;
                const auto x = data.row(i);
                for (std::size_t j = 0; j < d; ++j) grad[j] += c * x[j];
            }
            double gmax = 0.0;
            for (double g : grad) gmax = std::max(gmax, std::abs(g));
            if (gmax <= 1e-14) break;

            double s = inner_step;
            bool accepted = false;
            for (int halving = 0; halving <= 20; ++halving) {
                for (std::size_t j = 0; j < d; ++j) w_next[j] = w[j] - s * grad[j];
                project(w_next, z_next);
                const double next = sq_error(*u, z_next);
                if (std::isfinite(next) && next <= err) {
                    w.swap(w_next);
                    z.swap(z_next);
                    err = next;
                    accepted = true;
                    break;
                }
                s *= 0.5;
            }
            if (!accepted) break;
        }
    }
    refit_transfer();

    return BaselineModel{BaselineKind::SimAlternating, LinearDirection{std::move(w), std::nullopt},
                         0.0, std::move(u)};
}

BaselineModel fit_train_mean(const LabeledDataset& data) {
    double mean = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) mean += data.target(i);
    mean /= static_cast<double>(data.size());
    return BaselineModel{BaselineKind::Linear,
                         LinearDirection{std::vector<double>(data.dim(), 0.0), std::nullopt}, mean,
                         std::nullopt};
}

}  // namespace isoglm
