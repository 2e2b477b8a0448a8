#include "isoglm/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>

namespace isoglm {

double LinearDirection::norm() const {
    double s = 0.0;
    for (double wi : w) s += wi * wi;
    return std::sqrt(s);
}

LinearDirection make_ground_truth_direction(std::vector<double> w, double norm_bound) {
    LinearDirection dir{std::move(w), norm_bound};
    for (double wi : dir.w)
        if (!std::isfinite(wi))
            throw std::invalid_argument("LinearDirection: non-finite entry");
    if (norm_bound < 0.0 || dir.norm() > norm_bound * (1.0 + 1e-12) + 1e-12)
        throw std::invalid_argument("LinearDirection: ground-truth norm exceeds its bound");
    return dir;
}

double dot(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double eval_transfer(KnownTransfer kind, double t) {
    switch (kind) {
        case KnownTransfer::SigmoidRescaled:
            if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
            {
                const double e = std::exp(t);
                return e / (1.0 + e);
            }
        case KnownTransfer::Ramp:
            return std::clamp(0.5 * (1.0 + t), 0.0, 1.0);
        case KnownTransfer::ClampIdentity:
            return std::clamp(t, 0.0, 1.0);
    }
    throw std::logic_error("eval_transfer: unknown kind");
}

std::string transfer_name(KnownTransfer kind) {
    switch (kind) {
        case KnownTransfer::SigmoidRescaled: return "sigmoid-rescaled";
        case KnownTransfer::Ramp: return "ramp";
        case KnownTransfer::ClampIdentity: return "clamp-identity";
    }
    return "?";
}

std::optional<KnownTransfer> transfer_by_name(std::string_view name) {
    if (name == "sigmoid-rescaled" || name == "sigmoid") return KnownTransfer::SigmoidRescaled;
    if (name == "ramp") return KnownTransfer::Ramp;
    if (name == "clamp-identity") return KnownTransfer::ClampIdentity;
    return std::nullopt;
}

namespace {

// One-time grid check of the analytic transfers: non-decreasing, 1-Lipschitz,
// values in [0,1].
void verify_known_transfers() {
    static std::once_flag flag;
    std::call_once(flag, [] {
        for (KnownTransfer kind : {KnownTransfer::SigmoidRescaled, KnownTransfer::Ramp,
                                   KnownTransfer::ClampIdentity}) {
            const double step = 0.005;
            double prev = eval_transfer(kind, -8.0);
            for (double t = -8.0 + step; t <= 8.0; t += step) {
                const double cur = eval_transfer(kind, t);
                if (cur < 0.0 || cur > 1.0 || cur < prev - 1e-12 ||
                    cur - prev > step + 1e-12)
                    throw std::logic_error("TransferSpec: analytic transfer fails its invariants");
                prev = cur;
            }
        }
    });
}

}  // namespace

TransferSpec TransferSpec::known(KnownTransfer kind) {
    verify_known_transfers();
    return TransferSpec(std::variant<KnownTransfer, MonotoneFn>{kind});
}

TransferSpec TransferSpec::fitted(MonotoneFn fn) {
    return TransferSpec(std::variant<KnownTransfer, MonotoneFn>{std::move(fn)});
}

double TransferSpec::operator()(double t) const {
    if (const KnownTransfer* kind = std::get_if<KnownTransfer>(&fn_))
        return eval_transfer(*kind, t);
    return std::get<MonotoneFn>(fn_)(t);
}

std::string TransferSpec::name() const {
    if (const KnownTransfer* kind = std::get_if<KnownTransfer>(&fn_)) return transfer_name(*kind);
    return "fitted";
}

}  // namespace isoglm
