#include "isoglm/isotonic.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <string>

namespace isoglm {

namespace {

bool all_finite(const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

// Points sharing an abscissa, pooled into weighted points. `group` maps each
// original index to its pooled index.
struct Pooled {
    std::vector<double> z;
    std::vector<double> y;
    std::vector<double> w;
    std::vector<std::size_t> group;
};

Pooled pool_ties(const RegressionInstance& in) {
    Pooled p;
    p.group.resize(in.size());
    for (std::size_t i = 0; i < in.size(); ++i) {
        if (!p.z.empty() && in.z[i] == p.z.back()) {
            const double wsum = p.w.back() + in.weights[i];
            p.y.back() += (in.y[i] - p.y.back()) * (in.weights[i] / wsum);
            p.w.back() = wsum;
        } else {
            p.z.push_back(in.z[i]);
            p.y.push_back(in.y[i]);
            p.w.push_back(in.weights[i]);
        }
        p.group[i] = p.z.size() - 1;
    }
    return p;
}

std::vector<double> expand(const std::vector<double>& pooled_values,
                           const std::vector<std::size_t>& group) {
    std::vector<double> out(group.size());
    for (std::size_t i = 0; i < group.size(); ++i) out[i] = pooled_values[group[i]];
    return out;
}

double weighted_mean(const std::vector<double>& y, const std::vector<double>& w) {
    double sw = 0.0, swy = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        sw += w[i];
        swy += w[i] * y[i];
    }
    return swy / sw;
}

// Weighted PAV over strictly increasing abscissae: stack of blocks, merging
// while adjacent block means are out of order.
std::vector<double> pav_pooled(const std::vector<double>& y, const std::vector<double>& w) {
    struct Block {
        double wsum;
        double mean;
        std::size_t count;
    };
    std::vector<Block> stack;
    stack.reserve(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        Block b{w[i], y[i], 1};
        while (!stack.empty() && stack.back().mean > b.mean) {
            const Block& prev = stack.back();
            const double wsum = prev.wsum + b.wsum;
            b.mean = (prev.wsum * prev.mean + b.wsum * b.mean) / wsum;
            b.wsum = wsum;
            b.count += prev.count;
            stack.pop_back();
        }
        stack.push_back(b);
    }
    std::vector<double> v;
    v.reserve(y.size());
    for (const Block& b : stack) v.insert(v.end(), b.count, b.mean);
    return v;
}

// Exact primal active-set solver for the pooled LPAV problem
//
//   minimize   sum_k w_k (v_k - y_k)^2
//   subject to 0 <= v_{k+1} - v_k <= cap_k,      cap_k = L * (z_{k+1} - z_k) > 0.
//
// A link between k and k+1 is Free, MonTight (difference pinned to 0) or
// LipTight (difference pinned to cap_k). Maximal runs of tight links form
// blocks whose internal offsets are fixed, so the equality-constrained
// minimizer is a weighted mean per block. The iteration starts from the
// all-MonTight point (the global weighted mean, always feasible), steps
// toward the current equality-constrained minimizer until a free link blocks
// (then merges), and at unblocked steps drops one active link whose KKT
// multiplier has the wrong sign (then splits). Termination follows from
// strict convexity; a least-index rule takes over after a while to rule out
// cycling on degenerate instances.
class LpavActiveSet {
public:
    LpavActiveSet(const std::vector<double>& z, const std::vector<double>& y,
                  const std::vector<double>& w, double bound)
        : y_(y), w_(w), n_(y.size()) {
        caps_.resize(n_ - 1);
        for (std::size_t k = 0; k + 1 < n_; ++k) caps_[k] = bound * (z[k + 1] - z[k]);
        state_.assign(n_ - 1, kMon);
        v_.assign(n_, weighted_mean(y, w));
        xstar_.resize(n_);
        double total_w = std::accumulate(w.begin(), w.end(), 0.0);
        dual_tol_ = 1e-12 * (1.0 + 2.0 * total_w);
    }

    std::vector<double> solve() {
        const long hard_cap = 300 * static_cast<long>(n_) + 10000;
        const long bland_after = 40 * static_cast<long>(n_) + 400;
        for (long iter = 0; iter < hard_cap; ++iter) {
            const bool bland = iter > bland_after;
            compute_xstar();

            double alpha = 1.0;
            std::size_t block_link = n_;
            int block_state = kFree;
            for (std::size_t k = 0; k + 1 < n_; ++k) {
                if (state_[k] != kFree) continue;
                const double d0 = v_[k + 1] - v_[k];
                const double dd = (xstar_[k + 1] - v_[k + 1]) - (xstar_[k] - v_[k]);
                if (dd < -kDirTol) {
                    const double a = -d0 / dd;
                    if (a < alpha) {
                        alpha = a;
                        block_link = k;
                        block_state = kMon;
                        if (bland) break;
                    }
                } else if (dd > kDirTol) {
                    const double a = (caps_[k] - d0) / dd;
                    if (a < alpha) {
                        alpha = a;
                        block_link = k;
                        block_state = kLip;
                        if (bland) break;
                    }
                }
            }

            if (block_link < n_) {
                alpha = std::max(alpha, 0.0);
                for (std::size_t j = 0; j < n_; ++j) v_[j] += alpha * (xstar_[j] - v_[j]);
                state_[block_link] = block_state;
                continue;
            }

            v_ = xstar_;
            const std::size_t drop = find_drop(bland);
            if (drop == n_) return v_;  // KKT satisfied
            state_[drop] = kFree;
        }
        throw std::runtime_error("lpav: active-set iteration cap exceeded");
    }

private:
    static constexpr int kFree = 0;
    static constexpr int kMon = 1;
    static constexpr int kLip = 2;
    static constexpr double kDirTol = 1e-15;

    // Equality-constrained minimizer for the current link states.
    void compute_xstar() {
        std::size_t a = 0;
        while (a < n_) {
            std::size_t b = a;
            double offset = 0.0;
            double sw = w_[a];
            double swd = w_[a] * y_[a];  // sum of w * (y - offset)
            while (b + 1 < n_ && state_[b] != kFree) {
                offset += state_[b] == kLip ? caps_[b] : 0.0;
                ++b;
                sw += w_[b];
                swd += w_[b] * (y_[b] - offset);
            }
            const double level = swd / sw;
            double o = 0.0;
            xstar_[a] = level;
            for (std::size_t j = a; j < b; ++j) {
                o += state_[j] == kLip ? caps_[j] : 0.0;
                xstar_[j + 1] = level + o;
            }
            a = b + 1;
        }
    }

    // Multiplier sweep at v == xstar. Within a block starting at `a`,
    // mu_k = -sum_{j<=k} 2 w_j (v_j - y_j); MonTight links need mu >= 0,
    // LipTight links need mu <= 0. Returns the link to drop, or n_ if none.
    std::size_t find_drop(bool bland) const {
        std::size_t worst_link = n_;
        double worst_violation = dual_tol_;
        double mu = 0.0;
        for (std::size_t k = 0; k + 1 < n_; ++k) {
            mu -= 2.0 * w_[k] * (v_[k] - y_[k]);
            if (state_[k] == kFree) {
                mu = 0.0;
                continue;
            }
            const double violation = state_[k] == kMon ? -mu : mu;
            if (violation > worst_violation) {
                if (bland) return k;
                worst_violation = violation;
                worst_link = k;
            }
        }
        return worst_link;
    }

    const std::vector<double>& y_;
    const std::vector<double>& w_;
    std::size_t n_;
    std::vector<double> caps_;
    std::vector<int> state_;
    std::vector<double> v_;
    std::vector<double> xstar_;
    double dual_tol_ = 1e-12;
};

void validate_nonempty(const RegressionInstance& instance, const char* op) {
    if (instance.size() == 0)
        throw std::invalid_argument(std::string(op) + ": empty instance");
    if (instance.y.size() != instance.z.size() || instance.weights.size() != instance.z.size())
        throw std::invalid_argument(std::string(op) + ": instance not canonical");
}

}  // namespace

RegressionInstance RegressionInstance::canonical(std::vector<double> z, std::vector<double> y,
                                                 std::vector<double> weights) {
    if (z.empty() || z.size() != y.size())
        throw std::invalid_argument("RegressionInstance: z and y must have equal, nonzero length");
    if (weights.empty()) weights.assign(z.size(), 1.0);
    if (weights.size() != z.size())
        throw std::invalid_argument("RegressionInstance: weights length mismatch");
    if (!all_finite(z) || !all_finite(y) || !all_finite(weights))
        throw std::invalid_argument("RegressionInstance: non-finite input");
    for (double yi : y)
        if (yi < 0.0 || yi > 1.0)
            throw std::invalid_argument("RegressionInstance: targets must lie in [0,1]");
    for (double wi : weights)
        if (wi <= 0.0) throw std::invalid_argument("RegressionInstance: weights must be positive");

    std::vector<std::size_t> order(z.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return z[a] < z[b]; });

    RegressionInstance out;
    out.z.reserve(z.size());
    out.y.reserve(z.size());
    out.weights.reserve(z.size());
    for (std::size_t idx : order) {
        out.z.push_back(z[idx]);
        out.y.push_back(y[idx]);
        out.weights.push_back(weights[idx]);
    }
    return out;
}

double fit_objective(const RegressionInstance& instance, const std::vector<double>& yhat) {
    if (yhat.size() != instance.size())
        throw std::invalid_argument("fit_objective: length mismatch");
    double obj = 0.0;
    for (std::size_t i = 0; i < yhat.size(); ++i) {
        const double r = yhat[i] - instance.y[i];
        obj += instance.weights[i] * r * r;
    }
    return obj;
}

IsotonicFit pav(const RegressionInstance& instance) {
    validate_nonempty(instance, "pav");
    Pooled p = pool_ties(instance);
    std::vector<double> fitted = pav_pooled(p.y, p.w);
    return IsotonicFit{instance.z, expand(fitted, p.group), std::nullopt};
}

IsotonicFit lpav(const RegressionInstance& instance, double lipschitz_bound) {
    validate_nonempty(instance, "lpav");
    if (std::isnan(lipschitz_bound) || lipschitz_bound < 0.0)
        throw std::invalid_argument("lpav: lipschitz_bound must be >= 0");
    if (!all_finite(instance.z) || !all_finite(instance.y))
        throw std::invalid_argument("lpav: non-finite input");

    Pooled p = pool_ties(instance);
    std::vector<double> fitted;
    if (p.z.size() == 1 || lipschitz_bound == 0.0) {
        fitted.assign(p.z.size(), weighted_mean(p.y, p.w));
    } else {
        fitted = LpavActiveSet(p.z, p.y, p.w, lipschitz_bound).solve();
    }
    return IsotonicFit{instance.z, expand(fitted, p.group), lipschitz_bound};
}

namespace {

// Enumeration oracle: every link is free or pinned to one of its two bounds;
// for each activity pattern solve the equality-constrained problem and keep
// the best feasible outcome. The optimizer's own pattern is among the 3^(m-1)
// candidates, so the best feasible candidate is the exact solution.
std::vector<double> oracle_enumerate(const std::vector<double>& z, const std::vector<double>& y,
                                     const std::vector<double>& w, double bound) {
    const std::size_t n = z.size();
    std::vector<double> caps(n - 1);
    for (std::size_t k = 0; k + 1 < n; ++k) caps[k] = bound * (z[k + 1] - z[k]);

    std::vector<int> state(n - 1, 0);
    std::vector<double> candidate(n), best;
    double best_obj = std::numeric_limits<double>::infinity();
    const double feas_tol = 1e-11;

    while (true) {
        // Blocks per the current pattern (0 free, 1 diff=0, 2 diff=cap).
        std::size_t a = 0;
        while (a < n) {
            std::size_t b = a;
            double offset = 0.0, sw = w[a], swd = w[a] * y[a];
            while (b + 1 < n && state[b] != 0) {
                offset += state[b] == 2 ? caps[b] : 0.0;
                ++b;
                sw += w[b];
                swd += w[b] * (y[b] - offset);
            }
            const double level = swd / sw;
            double o = 0.0;
            candidate[a] = level;
            for (std::size_t j = a; j < b; ++j) {
                o += state[j] == 2 ? caps[j] : 0.0;
                candidate[j + 1] = level + o;
            }
            a = b + 1;
        }
        bool feasible = true;
        for (std::size_t k = 0; k + 1 < n && feasible; ++k) {
            const double d = candidate[k + 1] - candidate[k];
            feasible = d >= -feas_tol && d <= caps[k] + feas_tol;
        }
        if (feasible) {
            double obj = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double r = candidate[i] - y[i];
                obj += w[i] * r * r;
            }
            if (obj < best_obj) {
                best_obj = obj;
                best = candidate;
            }
        }
        // Next pattern, odometer-style.
        std::size_t k = 0;
        for (; k + 1 < n; ++k) {
            if (++state[k] <= 2) break;
            state[k] = 0;
        }
        if (k + 1 >= n) break;
    }
    return best;
}

// Dykstra's cyclic projections onto the per-link slabs
// {v : 0 <= v_{k+1} - v_k <= cap_k} in the sqrt(w)-weighted metric. The
// weighted projection of y onto the intersection is the LPAV minimizer.
std::vector<double> oracle_dykstra(const std::vector<double>& z, const std::vector<double>& y,
                                   const std::vector<double>& w, double bound) {
    const std::size_t n = z.size();
    std::vector<double> caps(n - 1);
    for (std::size_t k = 0; k + 1 < n; ++k) caps[k] = bound * (z[k + 1] - z[k]);

    std::vector<double> x = y;
    std::vector<double> inc(2 * (n - 1), 0.0);  // per-slab correction, coords k and k+1
    std::vector<double> prev(n);

    const long max_sweeps = 2000000;
    double last_change = std::numeric_limits<double>::infinity();
    long plateau = 0;
    for (long sweep = 0; sweep < max_sweeps; ++sweep) {
        prev = x;
        for (std::size_t k = 0; k + 1 < n; ++k) {
            const double pk = x[k] + inc[2 * k];
            const double pk1 = x[k + 1] + inc[2 * k + 1];
            const double diff = pk1 - pk;
            double qk = pk, qk1 = pk1;
            if (diff < 0.0 || diff > caps[k]) {
                const double b = diff < 0.0 ? 0.0 : caps[k];
                qk = (w[k] * pk + w[k + 1] * (pk1 - b)) / (w[k] + w[k + 1]);
                qk1 = qk + b;
            }
            inc[2 * k] = pk - qk;
            inc[2 * k + 1] = pk1 - qk1;
            x[k] = qk;
            x[k + 1] = qk1;
        }
        double change = 0.0, scale = 1.0;
        for (std::size_t i = 0; i < n; ++i) {
            change = std::max(change, std::abs(x[i] - prev[i]));
            scale = std::max(scale, std::abs(x[i]));
        }
        if (change <= 1e-14 * scale) return x;
        // Rounding can stall the sweep-to-sweep change above the threshold;
        // accept once the iterate stops improving and is feasible.
        if (change >= last_change * 0.999999) {
            if (++plateau > 2000) {
                bool feasible = true;
                for (std::size_t k = 0; k + 1 < n && feasible; ++k) {
                    const double d = x[k + 1] - x[k];
                    feasible = d >= -1e-10 && d <= caps[k] + 1e-10;
                }
                if (feasible) return x;
                plateau = 0;
            }
        } else {
            plateau = 0;
        }
        last_change = change;
    }
    throw OracleFailure("lpav_reference_oracle: Dykstra projection did not converge");
}

}  // namespace

IsotonicFit lpav_reference_oracle(const RegressionInstance& instance, double lipschitz_bound) {
    validate_nonempty(instance, "lpav_reference_oracle");
    if (std::isnan(lipschitz_bound) || lipschitz_bound < 0.0)
        throw std::invalid_argument("lpav_reference_oracle: lipschitz_bound must be >= 0");

    // Independent route: no tie pooling, the raw chain (zero-width slabs for
    // tied abscissae) is handled directly.
    std::vector<double> fitted;
    if (instance.size() == 1) {
        fitted = instance.y;
    } else if (instance.size() <= 10) {
        fitted = oracle_enumerate(instance.z, instance.y, instance.weights, lipschitz_bound);
    } else {
        fitted = oracle_dykstra(instance.z, instance.y, instance.weights, lipschitz_bound);
    }
    return IsotonicFit{instance.z, fitted, lipschitz_bound};
}

MonotoneFn::MonotoneFn(std::vector<double> knots_z, std::vector<double> knots_v, Interp mode)
    : knots_z_(std::move(knots_z)), knots_v_(std::move(knots_v)), mode_(mode) {
    if (knots_z_.empty() || knots_z_.size() != knots_v_.size())
        throw std::invalid_argument("MonotoneFn: knots must have equal, nonzero length");
    if (!all_finite(knots_z_) || !all_finite(knots_v_))
        throw std::invalid_argument("MonotoneFn: non-finite knots");
    for (std::size_t i = 0; i + 1 < knots_z_.size(); ++i)
        if (!(knots_z_[i] < knots_z_[i + 1]))
            throw std::invalid_argument("MonotoneFn: abscissae must be strictly increasing");

    const double tol = 1e-9;
    for (std::size_t i = 0; i < knots_v_.size(); ++i) {
        if (knots_v_[i] < -tol || knots_v_[i] > 1.0 + tol)
            throw std::invalid_argument("MonotoneFn: values must lie in [0,1]");
        if (i > 0 && knots_v_[i] < knots_v_[i - 1] - tol)
            throw std::invalid_argument("MonotoneFn: values must be non-decreasing");
        // Clean up fitting round-off so evaluation is exactly monotone in [0,1].
        knots_v_[i] = std::clamp(knots_v_[i], i > 0 ? knots_v_[i - 1] : 0.0, 1.0);
    }
}

double MonotoneFn::operator()(double t) const {
    const auto& z = knots_z_;
    const auto& v = knots_v_;
    if (t <= z.front()) return v.front();
    if (t >= z.back()) return v.back();
    // First knot strictly right of t; t is interior, so 0 < hi < size.
    const std::size_t hi = static_cast<std::size_t>(
        std::upper_bound(z.begin(), z.end(), t) - z.begin());
    const std::size_t lo = hi - 1;
    if (t == z[lo]) return v[lo];
    if (mode_ == Interp::StepMidpoint) {
        const double mid = 0.5 * (z[lo] + z[hi]);
        return t < mid ? v[lo] : v[hi];
    }
    const double frac = (t - z[lo]) / (z[hi] - z[lo]);
    return v[lo] + frac * (v[hi] - v[lo]);
}

namespace {

MonotoneFn build_fn(const IsotonicFit& fit, Interp mode) {
    if (fit.z.empty() || fit.z.size() != fit.yhat.size())
        throw std::invalid_argument("build_monotone_fn: invalid fit");
    std::vector<double> kz, kv;
    kz.reserve(fit.z.size());
    kv.reserve(fit.z.size());
    for (std::size_t i = 0; i < fit.z.size(); ++i) {
        if (!kz.empty() && fit.z[i] == kz.back()) {
            if (std::abs(fit.yhat[i] - kv.back()) > 1e-6)
                throw std::invalid_argument(
                    "build_monotone_fn: tied abscissae carry distinct fitted values");
            continue;
        }
        kz.push_back(fit.z[i]);
        kv.push_back(fit.yhat[i]);
    }
    if (fit.lipschitz_bound) {
        const double bound = *fit.lipschitz_bound;
        for (std::size_t i = 0; i + 1 < kz.size(); ++i)
            if (kv[i + 1] - kv[i] > bound * (kz[i + 1] - kz[i]) + 1e-9)
                throw std::invalid_argument("build_monotone_fn: fit violates its Lipschitz bound");
    }
    return MonotoneFn(std::move(kz), std::move(kv), mode);
}

}  // namespace

MonotoneFn build_monotone_fn(const IsotonicFit& fit) { return build_fn(fit, Interp::Linear); }

MonotoneFn build_step_fn(const IsotonicFit& fit) { return build_fn(fit, Interp::StepMidpoint); }

}  // namespace isoglm
