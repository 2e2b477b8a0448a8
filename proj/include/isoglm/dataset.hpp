#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "isoglm/transfer.hpp"

namespace isoglm {

// Generating model attached to synthetic data: E[y|x] = transfer(w . x).
struct GroundTruth {
    LinearDirection direction;
    TransferSpec transfer;

    double conditional_mean(std::span<const double> x) const {
        return transfer(dot(direction.w, x));
    }
};

struct DatasetMeta {
    std::string name;
    std::optional<GroundTruth> ground_truth;
    // Scaling constants applied on load: features were divided by
    // feature_scale, targets mapped as (y - target_offset) / target_span.
    std::optional<double> feature_scale;
    std::optional<double> target_offset;
    std::optional<double> target_span;
    std::size_t rejected_rows = 0;
};

// Row-major feature matrix with targets in [0,1]. Everything is validated at
// construction, so downstream code can assume finite features and in-range
// targets.
class LabeledDataset {
public:
    LabeledDataset(std::size_t dim, std::vector<double> features, std::vector<double> targets,
                   DatasetMeta meta = {});

    std::size_t size() const { return targets_.size(); }
    std::size_t dim() const { return dim_; }
    std::span<const double> row(std::size_t i) const {
        return {features_.data() + i * dim_, dim_};
    }
    double target(std::size_t i) const { return targets_[i]; }
    const std::vector<double>& targets() const { return targets_; }
    const DatasetMeta& meta() const { return meta_; }

    LabeledDataset subset(std::span<const std::size_t> rows) const;

private:
    std::size_t dim_;
    std::vector<double> features_;
    std::vector<double> targets_;
    DatasetMeta meta_;
};

// The overfitting-prone sparse construction: w = e_1, first coordinate
// uniform on {-1,0,1}, one random other coordinate set to 1, binary targets
// with mean ramp(w . x) in {0, 1/2, 1}. Ground truth is stored in the meta.
LabeledDataset generate_synthetic_sim(std::size_t d, std::size_t m, std::uint64_t seed);

// Realizable GLM data: direction uniform on the radius-W sphere, features
// uniform in the unit ball, binary targets with mean transfer(w . x).
LabeledDataset generate_realizable_glm(std::size_t d, std::size_t m, double norm_bound,
                                       KnownTransfer transfer, std::uint64_t seed);

enum class FeatureScaling { UnitBall, None };

std::string scaling_name(FeatureScaling s);
std::optional<FeatureScaling> scaling_by_name(std::string_view name);

// Loads a delimited numeric text file (comma or whitespace separated, header
// row). The target column is selected by header name, or by 0-based index if
// the name is not found and parses as an integer. Rows with missing or
// non-numeric cells are dropped and counted in meta().rejected_rows. Targets
// are min-max scaled to [0,1]; UnitBall scaling divides every feature row by
// the maximum row norm.
LabeledDataset load_tabular(const std::filesystem::path& path, const std::string& target_column,
                            FeatureScaling scaling);

// Cross-validation fold assignment: a seeded shuffle dealt round-robin, so
// fold sizes differ by at most one.
struct FoldPlan {
    std::size_t fold_count = 0;
    std::vector<std::size_t> assignments;
    std::uint64_t seed = 0;

    std::vector<std::size_t> test_rows(std::size_t fold) const;
    std::vector<std::size_t> train_rows(std::size_t fold) const;
};

FoldPlan make_folds(std::size_t m, std::size_t fold_count, std::uint64_t seed);

}  // namespace isoglm
