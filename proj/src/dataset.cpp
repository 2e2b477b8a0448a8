#include "isoglm/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "isoglm/rng.hpp"

namespace isoglm {

LabeledDataset::LabeledDataset(std::size_t dim, std::vector<double> features,
                               std::vector<double> targets, DatasetMeta meta)
    : dim_(dim), features_(std::move(features)), targets_(std::move(targets)),
      meta_(std::move(meta)) {
    if (dim_ == 0) throw std::invalid_argument("LabeledDataset: dimension must be positive");
    if (targets_.empty()) throw std::invalid_argument("LabeledDataset: no rows");
    if (features_.size() != targets_.size() * dim_)
        throw std::invalid_argument("LabeledDataset: feature matrix shape mismatch");
    for (double x : features_)
        if (!std::isfinite(x)) throw std::invalid_argument("LabeledDataset: non-finite feature");
    for (double y : targets_)
        if (!std::isfinite(y) || y < 0.0 || y > 1.0)
            throw std::invalid_argument("LabeledDataset: targets must lie in [0,1]");
}

LabeledDataset LabeledDataset::subset(std::span<const std::size_t> rows) const {
    std::vector<double> features;
    features.reserve(rows.size() * dim_);
    std::vector<double> targets;
    targets.reserve(rows.size());
    for (std::size_t r : rows) {
        if (r >= size()) throw std::out_of_range("LabeledDataset::subset: row out of range");
        const auto x = row(r);
        features.insert(features.end(), x.begin(), x.end());
        targets.push_back(targets_[r]);
    }
    return LabeledDataset(dim_, std::move(features), std::move(targets), meta_);
}

LabeledDataset generate_synthetic_sim(std::size_t d, std::size_t m, std::uint64_t seed) {
    if (d < 2) throw std::invalid_argument("generate_synthetic_sim: d must be at least 2");
    if (m == 0) throw std::invalid_argument("generate_synthetic_sim: m must be positive");

    Rng rng(seed);
    std::vector<double> features(m * d, 0.0);
    std::vector<double> targets(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double first = static_cast<double>(rng.below(3)) - 1.0;  // uniform on {-1,0,1}
        features[i * d] = first;
        const std::size_t hot = 1 + rng.below(d - 1);
        features[i * d + hot] = 1.0;
        const double mean = 0.5 * (1.0 + first);
        targets[i] = rng.uniform01() < mean ? 1.0 : 0.0;
    }

    std::vector<double> w(d, 0.0);
    w[0] = 1.0;
    DatasetMeta meta;
    meta.name = "synthetic-sim";
    meta.ground_truth = GroundTruth{make_ground_truth_direction(std::move(w), 1.0),
                                    TransferSpec::known(KnownTransfer::Ramp)};
    return LabeledDataset(d, std::move(features), std::move(targets), std::move(meta));
}

LabeledDataset generate_realizable_glm(std::size_t d, std::size_t m, double norm_bound,
                                       KnownTransfer transfer, std::uint64_t seed) {
    if (d == 0 || m == 0)
        throw std::invalid_argument("generate_realizable_glm: d and m must be positive");
    if (!(norm_bound >= 0.0) || !std::isfinite(norm_bound))
        throw std::invalid_argument("generate_realizable_glm: norm bound must be >= 0");

    Rng rng(seed);
    std::vector<double> w = rng.on_sphere(d);
    for (double& wi : w) wi *= norm_bound;
    const TransferSpec spec = TransferSpec::known(transfer);

    std::vector<double> features;
    features.reserve(m * d);
    std::vector<double> targets(m);
    for (std::size_t i = 0; i < m; ++i) {
        std::vector<double> x = rng.in_ball(d);
        const double mean = spec(dot(w, x));
        targets[i] = rng.uniform01() < mean ? 1.0 : 0.0;
        features.insert(features.end(), x.begin(), x.end());
    }

    DatasetMeta meta;
    meta.name = "synthetic-glm";
    meta.ground_truth = GroundTruth{make_ground_truth_direction(std::move(w), norm_bound), spec};
    return LabeledDataset(d, std::move(features), std::move(targets), std::move(meta));
}

std::string scaling_name(FeatureScaling s) {
    return s == FeatureScaling::UnitBall ? "unit-ball" : "none";
}

std::optional<FeatureScaling> scaling_by_name(std::string_view name) {
    if (name == "unit-ball") return FeatureScaling::UnitBall;
    if (name == "none") return FeatureScaling::None;
    return std::nullopt;
}

namespace {

std::vector<std::string> split_cells(const std::string& line, bool comma) {
    std::vector<std::string> cells;
    std::string cell;
    if (comma) {
        std::stringstream ss(line);
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (!line.empty() && line.back() == ',') cells.emplace_back();
    } else {
        std::stringstream ss(line);
        while (ss >> cell) cells.push_back(cell);
    }
    return cells;
}

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

bool parse_double(const std::string& cell, double& out) {
    const std::string t = trim(cell);
    if (t.empty()) return false;
    const char* begin = t.data();
    const char* end = begin + t.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc{} && ptr == end && std::isfinite(out);
}

}  // namespace

LabeledDataset load_tabular(const std::filesystem::path& path, const std::string& target_column,
                            FeatureScaling scaling) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_tabular: cannot open " + path.string());

    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("load_tabular: empty file " + path.string());
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const bool comma = line.find(',') != std::string::npos;

    std::vector<std::string> header = split_cells(line, comma);
    for (auto& h : header) h = trim(h);
    if (header.size() < 2)
        throw std::runtime_error("load_tabular: need at least one feature and a target column");

    std::size_t target_idx = header.size();
    for (std::size_t j = 0; j < header.size(); ++j)
        if (header[j] == trim(target_column)) {
            target_idx = j;
            break;
        }
    if (target_idx == header.size()) {
        std::size_t idx = 0;
        const std::string t = trim(target_column);
        auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), idx);
        if (ec == std::errc{} && ptr == t.data() + t.size() && idx < header.size())
            target_idx = idx;
        else
            throw std::runtime_error("load_tabular: target column '" + target_column +
                                     "' not found in " + path.string());
    }

    const std::size_t d = header.size() - 1;
    std::vector<double> features;
    std::vector<double> raw_targets;
    std::size_t rejected = 0;
    std::vector<double> row(header.size());
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        const std::vector<std::string> cells = split_cells(line, comma);
        bool ok = cells.size() == header.size();
        for (std::size_t j = 0; ok && j < cells.size(); ++j) ok = parse_double(cells[j], row[j]);
        if (!ok) {
            ++rejected;
            continue;
        }
        for (std::size_t j = 0; j < row.size(); ++j)
            if (j != target_idx) features.push_back(row[j]);
        raw_targets.push_back(row[target_idx]);
    }
    if (raw_targets.empty())
        throw std::runtime_error("load_tabular: no usable rows in " + path.string());

    const auto [lo_it, hi_it] = std::minmax_element(raw_targets.begin(), raw_targets.end());
    const double lo = *lo_it, hi = *hi_it;
    if (hi - lo <= 0.0)
        throw std::runtime_error("load_tabular: degenerate target range in " + path.string());
    std::vector<double> targets(raw_targets.size());
    for (std::size_t i = 0; i < raw_targets.size(); ++i)
        targets[i] = std::clamp((raw_targets[i] - lo) / (hi - lo), 0.0, 1.0);

    double scale = 1.0;
    if (scaling == FeatureScaling::UnitBall) {
        double max_norm_sq = 0.0;
        const std::size_t m = raw_targets.size();
        for (std::size_t i = 0; i < m; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < d; ++j) s += features[i * d + j] * features[i * d + j];
            max_norm_sq = std::max(max_norm_sq, s);
        }
        scale = max_norm_sq > 0.0 ? std::sqrt(max_norm_sq) : 1.0;
        for (double& x : features) x /= scale;
    }

    DatasetMeta meta;
    meta.name = path.filename().string();
    meta.feature_scale = scale;
    meta.target_offset = lo;
    meta.target_span = hi - lo;
    meta.rejected_rows = rejected;
    return LabeledDataset(d, std::move(features), std::move(targets), std::move(meta));
}

std::vector<std::size_t> FoldPlan::test_rows(std::size_t fold) const {
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < assignments.size(); ++i)
        if (assignments[i] == fold) rows.push_back(i);
    return rows;
}

std::vector<std::size_t> FoldPlan::train_rows(std::size_t fold) const {
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < assignments.size(); ++i)
        if (assignments[i] != fold) rows.push_back(i);
    return rows;
}

FoldPlan make_folds(std::size_t m, std::size_t fold_count, std::uint64_t seed) {
    if (fold_count < 2) throw std::invalid_argument("make_folds: need at least 2 folds");
    if (m < fold_count) throw std::invalid_argument("make_folds: more folds than rows");

    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    Rng rng(seed);
    rng.shuffle(order);

    FoldPlan plan;
    plan.fold_count = fold_count;
    plan.seed = seed;
    plan.assignments.resize(m);
    for (std::size_t pos = 0; pos < m; ++pos) plan.assignments[order[pos]] = pos % fold_count;
    return plan;
}

}  // namespace isoglm
