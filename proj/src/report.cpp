#include "isoglm/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace isoglm {

namespace {

std::string format_g(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string format_short(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

Json algorithms_to_json(const std::vector<Algorithm>& algorithms) {
    Json arr = Json::array();
    for (Algorithm a : algorithms) arr.push_back(algorithm_name(a));
    return arr;
}

std::vector<Algorithm> algorithms_from_json(const Json& arr) {
    std::vector<Algorithm> out;
    for (const auto& name : arr) {
        const auto a = algorithm_by_name(name.get<std::string>());
        if (!a) throw std::runtime_error("unknown algorithm: " + name.get<std::string>());
        out.push_back(*a);
    }
    return out;
}

Algorithm algorithm_from_json(const Json& j) {
    const auto a = algorithm_by_name(j.get<std::string>());
    if (!a) throw std::runtime_error("unknown algorithm: " + j.get<std::string>());
    return *a;
}

Json cap_to_json(const std::optional<std::size_t>& cap) {
    if (cap) return *cap;
    return nullptr;
}

std::optional<std::size_t> cap_from_json(const Json& j) {
    if (j.is_null()) return std::nullopt;
    return j.get<std::size_t>();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

Json timings_json(double wall_seconds) {
    Json j;
    j["wall_seconds"] = wall_seconds;
    return j;
}

}  // namespace

Json error_report_to_json(const ErrorReport& report) {
    Json j;
    j["mse"] = report.mse;
    j["normalized_mse"] = report.normalized_mse;
    if (report.excess_error)
        j["excess_error"] = *report.excess_error;
    else
        j["excess_error"] = nullptr;
    return j;
}

Json experiment_report_to_json(const ExperimentReport& report) {
    Json j;
    j["reference"] = algorithm_name(report.reference);
    j["fold_count"] = report.fold_count;
    Json algos = Json::array();
    for (const AlgorithmCvResult& result : report.algorithms) {
        Json a;
        a["algorithm"] = algorithm_name(result.algorithm);
        Json folds = Json::array();
        for (const FoldOutcome& fold : result.folds) {
            Json f = error_report_to_json(fold.test_error);
            f["selected_iteration"] = fold.selected_iteration;
            folds.push_back(std::move(f));
        }
        a["folds"] = std::move(folds);
        a["mean_normalized_mse"] = result.mean_normalized_mse;
        a["std_normalized_mse"] = result.std_normalized_mse;
        a["mean_mse"] = result.mean_mse;
        a["std_mse"] = result.std_mse;
        algos.push_back(std::move(a));
    }
    j["algorithms"] = std::move(algos);
    Json diffs = Json::array();
    for (const PairwiseDiff& diff : report.diffs_vs_reference) {
        Json d;
        d["algorithm"] = algorithm_name(diff.algorithm);
        d["per_fold"] = diff.per_fold;
        d["mean"] = diff.mean;
        d["stddev"] = diff.stddev;
        diffs.push_back(std::move(d));
    }
    j["diffs_vs_reference"] = std::move(diffs);
    return j;
}

Json synthetic_config_to_json(const SyntheticExperimentConfig& config) {
    Json j;
    j["type"] = "synthetic";
    j["d"] = config.d;
    j["m"] = config.m;
    j["folds"] = config.folds;
    j["repeats"] = config.repeats;
    j["iterations"] = config.iterations;
    j["holdout_fraction"] = config.holdout_fraction;
    j["seed"] = config.seed;
    j["algorithms"] = algorithms_to_json(config.algorithms);
    j["reference"] = algorithm_name(config.reference);
    j["lpav_subsample_cap"] = cap_to_json(config.lpav_subsample_cap);
    return j;
}

SyntheticExperimentConfig synthetic_config_from_json(const Json& j) {
    SyntheticExperimentConfig config;
    config.d = j.at("d").get<std::size_t>();
    config.m = j.at("m").get<std::size_t>();
    config.folds = j.at("folds").get<std::size_t>();
    config.repeats = j.at("repeats").get<std::size_t>();
    config.iterations = j.at("iterations").get<std::size_t>();
    config.holdout_fraction = j.at("holdout_fraction").get<double>();
    config.seed = j.at("seed").get<std::uint64_t>();
    config.algorithms = algorithms_from_json(j.at("algorithms"));
    config.reference = algorithm_from_json(j.at("reference"));
    config.lpav_subsample_cap = cap_from_json(j.at("lpav_subsample_cap"));
    return config;
}

Json tabular_config_to_json(const TabularExperimentConfig& config) {
    Json j;
    j["type"] = "tabular";
    j["dataset_path"] = config.dataset_path;
    j["target_column"] = config.target_column;
    j["scaling"] = scaling_name(config.scaling);
    j["folds"] = config.folds;
    j["iterations"] = config.iterations;
    j["holdout_fraction"] = config.holdout_fraction;
    j["seed"] = config.seed;
    j["algorithms"] = algorithms_to_json(config.algorithms);
    j["reference"] = algorithm_name(config.reference);
    j["lpav_subsample_cap"] = cap_to_json(config.lpav_subsample_cap);
    return j;
}

TabularExperimentConfig tabular_config_from_json(const Json& j) {
    TabularExperimentConfig config;
    config.dataset_path = j.at("dataset_path").get<std::string>();
    config.target_column = j.at("target_column").get<std::string>();
    const auto scaling = scaling_by_name(j.at("scaling").get<std::string>());
    if (!scaling) throw std::runtime_error("unknown scaling in config");
    config.scaling = *scaling;
    config.folds = j.at("folds").get<std::size_t>();
    config.iterations = j.at("iterations").get<std::size_t>();
    config.holdout_fraction = j.at("holdout_fraction").get<double>();
    config.seed = j.at("seed").get<std::uint64_t>();
    config.algorithms = algorithms_from_json(j.at("algorithms"));
    config.reference = algorithm_from_json(j.at("reference"));
    config.lpav_subsample_cap = cap_from_json(j.at("lpav_subsample_cap"));
    return config;
}

Json fit_config_to_json(const FitConfig& config) {
    Json j;
    j["type"] = "fit";
    j["dataset_path"] = config.dataset_path;
    j["target_column"] = config.target_column;
    j["scaling"] = scaling_name(config.scaling);
    j["algorithm"] = algorithm_name(config.algorithm);
    j["glmtron_transfer"] = transfer_name(config.glmtron_transfer);
    j["iterations"] = config.iterations;
    j["holdout_fraction"] = config.holdout_fraction;
    j["seed"] = config.seed;
    j["lpav_subsample_cap"] = cap_to_json(config.lpav_subsample_cap);
    return j;
}

FitConfig fit_config_from_json(const Json& j) {
    FitConfig config;
    config.dataset_path = j.at("dataset_path").get<std::string>();
    config.target_column = j.at("target_column").get<std::string>();
    const auto scaling = scaling_by_name(j.at("scaling").get<std::string>());
    if (!scaling) throw std::runtime_error("unknown scaling in config");
    config.scaling = *scaling;
    config.algorithm = algorithm_from_json(j.at("algorithm"));
    const auto transfer = transfer_by_name(j.at("glmtron_transfer").get<std::string>());
    if (!transfer) throw std::runtime_error("unknown transfer in config");
    config.glmtron_transfer = *transfer;
    config.iterations = j.at("iterations").get<std::size_t>();
    config.holdout_fraction = j.at("holdout_fraction").get<double>();
    config.seed = j.at("seed").get<std::uint64_t>();
    config.lpav_subsample_cap = cap_from_json(j.at("lpav_subsample_cap"));
    return config;
}

Json canonical_synthetic_report(const SyntheticExperimentOutcome& outcome) {
    Json j;
    j["kind"] = "synthetic-experiment";
    j["config"] = synthetic_config_to_json(outcome.config);
    Json reps = Json::array();
    for (const ExperimentReport& rep : outcome.repeats)
        reps.push_back(experiment_report_to_json(rep));
    j["repeats"] = std::move(reps);
    Json aggs = Json::array();
    for (const RepeatAggregate& agg : outcome.aggregates) {
        Json a;
        a["algorithm"] = algorithm_name(agg.algorithm);
        a["repeat_means"] = agg.repeat_means;
        a["mean_normalized_mse"] = agg.mean_normalized_mse;
        a["std_normalized_mse"] = agg.std_normalized_mse;
        a["repeat_diff_means"] = agg.repeat_diff_means;
        a["mean_diff"] = agg.mean_diff;
        a["std_diff"] = agg.std_diff;
        aggs.push_back(std::move(a));
    }
    j["aggregate"] = std::move(aggs);
    return j;
}

Json canonical_tabular_report(const TabularExperimentOutcome& outcome) {
    Json j;
    j["kind"] = "tabular-experiment";
    j["config"] = tabular_config_to_json(outcome.config);
    j["rows_used"] = outcome.rows_used;
    j["rows_rejected"] = outcome.rows_rejected;
    j["report"] = experiment_report_to_json(outcome.report);
    return j;
}

namespace {

Json transfer_to_json(const TransferSpec& transfer) {
    Json t;
    if (transfer.is_known_analytic()) {
        t["type"] = "known";
        t["name"] = transfer.name();
    } else {
        const MonotoneFn& fn = *transfer.fitted_fn();
        t["type"] = "fitted";
        t["mode"] = fn.mode() == Interp::Linear ? "linear" : "step-midpoint";
        t["knots_z"] = fn.knots_z();
        t["knots_v"] = fn.knots_v();
    }
    return t;
}

}  // namespace

Json canonical_fit_report(const FitOutcome& outcome) {
    Json j;
    j["kind"] = "fit";
    j["config"] = fit_config_to_json(outcome.config);
    j["train_error"] = error_report_to_json(outcome.train_error);
    j["selected_iteration"] = outcome.selected_iteration;
    Json model;
    if (outcome.hypothesis) {
        model["family"] = "index-model";
        model["direction"] = outcome.hypothesis->direction.w;
        model["transfer"] = transfer_to_json(outcome.hypothesis->transfer);
    } else if (outcome.baseline) {
        model["family"] = outcome.baseline->kind == BaselineKind::Linear ? "linear"
                          : outcome.baseline->kind == BaselineKind::Logistic
                              ? "logistic"
                              : "sim-alternating";
        model["direction"] = outcome.baseline->direction.w;
        model["intercept"] = outcome.baseline->intercept;
        if (outcome.baseline->transfer)
            model["transfer"] = transfer_to_json(TransferSpec::fitted(*outcome.baseline->transfer));
    }
    j["model"] = std::move(model);
    return j;
}

std::string dump_report(const Json& j) { return j.dump(2) + "\n"; }

std::string transfer_plot_text(const MonotoneFn& fn) {
    const auto& z = fn.knots_z();
    const auto& v = fn.knots_v();
    std::string text = "# transfer plot: abscissa value\n";
    if (fn.mode() == Interp::Linear || z.size() == 1) {
        for (std::size_t i = 0; i < z.size(); ++i)
            text += format_g(z[i]) + " " + format_g(v[i]) + "\n";
        return text;
    }
    for (std::size_t i = 0; i < z.size(); ++i) {
        const double lo = i == 0 ? z.front() : 0.5 * (z[i - 1] + z[i]);
        const double hi = i + 1 == z.size() ? z.back() : 0.5 * (z[i] + z[i + 1]);
        text += format_g(lo) + " " + format_g(v[i]) + "\n";
        text += format_g(hi) + " " + format_g(v[i]) + "\n";
    }
    return text;
}

TransferPlotCheck validate_transfer_plot(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::vector<std::pair<double, double>> pts;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        double t = 0.0, v = 0.0;
        if (!(ss >> t >> v)) throw std::runtime_error("bad plot line in " + path.string());
        pts.emplace_back(t, v);
    }
    TransferPlotCheck check;
    check.points = pts.size();
    if (pts.empty()) return check;
    check.monotone = true;
    check.lipschitz_1 = true;
    check.piecewise_constant = true;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        const double dt = pts[i].first - pts[i - 1].first;
        const double dv = pts[i].second - pts[i - 1].second;
        if (dt < 0.0 || dv < -1e-9) check.monotone = false;
        if (dv > dt + 1e-9) check.lipschitz_1 = false;
        if (dv > 1e-12 && dt > 1e-12) check.piecewise_constant = false;
    }
    return check;
}

namespace {

std::string summary_csv(const std::vector<RepeatAggregate>& aggregates) {
    std::string text = "algorithm,mean_normalized_mse,std_normalized_mse\n";
    for (const RepeatAggregate& agg : aggregates)
        text += algorithm_name(agg.algorithm) + "," + format_short(agg.mean_normalized_mse) +
                "," + format_short(agg.std_normalized_mse) + "\n";
    return text;
}

std::string summary_csv(const ExperimentReport& report) {
    std::string text = "algorithm,mean_normalized_mse,std_normalized_mse,mean_mse,std_mse\n";
    for (const AlgorithmCvResult& result : report.algorithms)
        text += algorithm_name(result.algorithm) + "," +
                format_short(result.mean_normalized_mse) + "," +
                format_short(result.std_normalized_mse) + "," + format_short(result.mean_mse) +
                "," + format_short(result.std_mse) + "\n";
    return text;
}

std::string differences_csv_from(const std::vector<RepeatAggregate>& aggregates,
                                 Algorithm reference) {
    std::string text = "algorithm,mean_diff_vs_" + algorithm_name(reference) + ",std_diff\n";
    for (const RepeatAggregate& agg : aggregates)
        text += algorithm_name(agg.algorithm) + "," + format_short(agg.mean_diff) + "," +
                format_short(agg.std_diff) + "\n";
    return text;
}

std::string differences_csv_from(const ExperimentReport& report) {
    std::string text =
        "algorithm,mean_diff_vs_" + algorithm_name(report.reference) + ",std_diff\n";
    for (const PairwiseDiff& diff : report.diffs_vs_reference)
        text += algorithm_name(diff.algorithm) + "," + format_short(diff.mean) + "," +
                format_short(diff.stddev) + "\n";
    return text;
}

void append_transfer_plots(const ExperimentReport& report, const std::filesystem::path& dir,
                           std::vector<std::filesystem::path>& written) {
    for (const AlgorithmCvResult& result : report.algorithms) {
        if (!result.transfer_fold0) continue;
        const auto path = dir / ("transfer_" + algorithm_name(result.algorithm) + ".txt");
        write_text(path, transfer_plot_text(*result.transfer_fold0));
        written.push_back(path);
    }
}

}  // namespace

std::vector<std::filesystem::path> write_outputs(const SyntheticExperimentOutcome& outcome,
                                                 const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    std::vector<std::filesystem::path> written;

    write_text(dir / "report.json", dump_report(canonical_synthetic_report(outcome)));
    written.push_back(dir / "report.json");
    write_text(dir / "summary.csv", summary_csv(outcome.aggregates));
    written.push_back(dir / "summary.csv");
    write_text(dir / "differences.csv",
               differences_csv_from(outcome.aggregates, outcome.config.reference));
    written.push_back(dir / "differences.csv");
    if (!outcome.repeats.empty()) append_transfer_plots(outcome.repeats.front(), dir, written);
    write_text(dir / "timings.json", dump_report(timings_json(outcome.wall_seconds)));
    written.push_back(dir / "timings.json");
    return written;
}

std::vector<std::filesystem::path> write_outputs(const TabularExperimentOutcome& outcome,
                                                 const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    std::vector<std::filesystem::path> written;

    write_text(dir / "report.json", dump_report(canonical_tabular_report(outcome)));
    written.push_back(dir / "report.json");
    write_text(dir / "summary.csv", summary_csv(outcome.report));
    written.push_back(dir / "summary.csv");
    write_text(dir / "differences.csv", differences_csv_from(outcome.report));
    written.push_back(dir / "differences.csv");
    append_transfer_plots(outcome.report, dir, written);
    write_text(dir / "timings.json", dump_report(timings_json(outcome.wall_seconds)));
    written.push_back(dir / "timings.json");
    return written;
}

std::vector<std::filesystem::path> write_outputs(const FitOutcome& outcome,
                                                 const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    std::vector<std::filesystem::path> written;

    const Json report = canonical_fit_report(outcome);
    write_text(dir / "report.json", dump_report(report));
    written.push_back(dir / "report.json");
    write_text(dir / "model.json", dump_report(report.at("model")));
    written.push_back(dir / "model.json");

    const MonotoneFn* fn = nullptr;
    if (outcome.hypothesis) fn = outcome.hypothesis->transfer.fitted_fn();
    if (outcome.baseline && outcome.baseline->transfer) fn = &*outcome.baseline->transfer;
    if (fn) {
        const auto path =
            dir / ("transfer_" + algorithm_name(outcome.config.algorithm) + ".txt");
        write_text(path, transfer_plot_text(*fn));
        written.push_back(path);
    }
    write_text(dir / "timings.json", dump_report(timings_json(outcome.wall_seconds)));
    written.push_back(dir / "timings.json");
    return written;
}

}  // namespace isoglm
