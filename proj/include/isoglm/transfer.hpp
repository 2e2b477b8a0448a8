#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "isoglm/isotonic.hpp"

namespace isoglm {

// A weight vector with its Euclidean norm cap. The cap is an assertion for
// ground-truth directions; learned directions may exceed it transiently and
// simply leave it unset.
struct LinearDirection {
    std::vector<double> w;
    std::optional<double> norm_bound;

    double norm() const;
};

// Builds a ground-truth direction, checking the norm cap.
LinearDirection make_ground_truth_direction(std::vector<double> w, double norm_bound);

double dot(std::span<const double> a, std::span<const double> b);

// The built-in analytic transfer functions. All are non-decreasing,
// 1-Lipschitz and map into [0,1].
enum class KnownTransfer { SigmoidRescaled, Ramp, ClampIdentity };

double eval_transfer(KnownTransfer kind, double t);
std::string transfer_name(KnownTransfer kind);
std::optional<KnownTransfer> transfer_by_name(std::string_view name);

// Either a named analytic transfer or a fitted monotone function. Analytic
// transfers are grid-checked for monotonicity, the Lipschitz property and
// range on first construction; fitted functions carry their own invariants.
class TransferSpec {
public:
    static TransferSpec known(KnownTransfer kind);
    static TransferSpec fitted(MonotoneFn fn);

    double operator()(double t) const;
    bool is_known_analytic() const { return std::holds_alternative<KnownTransfer>(fn_); }
    const KnownTransfer* known_kind() const { return std::get_if<KnownTransfer>(&fn_); }
    const MonotoneFn* fitted_fn() const { return std::get_if<MonotoneFn>(&fn_); }
    std::string name() const;

private:
    explicit TransferSpec(std::variant<KnownTransfer, MonotoneFn> fn) : fn_(std::move(fn)) {}
    std::variant<KnownTransfer, MonotoneFn> fn_;
};

// A direction paired with a transfer: predicts transfer(w . x) in [0,1].
struct Hypothesis {
    LinearDirection direction;
    TransferSpec transfer;

    double predict(std::span<const double> x) const { return transfer(dot(direction.w, x)); }
};

}  // namespace isoglm
