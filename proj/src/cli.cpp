#include "isoglm/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <ostream>

#include "isoglm/report.hpp"

namespace isoglm {

namespace {

std::vector<Algorithm> parse_algorithm_list(const std::vector<std::string>& names) {
    std::vector<Algorithm> out;
    for (const std::string& name : names) {
        if (name == "all") {
            for (Algorithm a : {Algorithm::LIsotron, Algorithm::GlmTron, Algorithm::Isotron,
                                Algorithm::Linear, Algorithm::Logistic, Algorithm::Sim})
                if (std::find(out.begin(), out.end(), a) == out.end()) out.push_back(a);
            continue;
        }
        const auto a = algorithm_by_name(name);
        if (!a) throw CLI::ValidationError("--algorithms", "unknown algorithm '" + name + "'");
        if (std::find(out.begin(), out.end(), *a) == out.end()) out.push_back(*a);
    }
    return out;
}

void print_experiment_summary(const std::vector<RepeatAggregate>& aggregates, std::ostream& out) {
    for (const RepeatAggregate& agg : aggregates)
        out << "  " << algorithm_name(agg.algorithm) << ": normalized mse "
            << agg.mean_normalized_mse << " +- " << agg.std_normalized_mse << " (diff vs ref "
            << agg.mean_diff << " +- " << agg.std_diff << ")\n";
}

void print_experiment_summary(const ExperimentReport& report, std::ostream& out) {
    for (const AlgorithmCvResult& result : report.algorithms)
        out << "  " << algorithm_name(result.algorithm) << ": normalized mse "
            << result.mean_normalized_mse << " +- " << result.std_normalized_mse << "\n";
}

void print_written(const std::vector<std::filesystem::path>& files, std::ostream& out) {
    for (const auto& path : files) out << "wrote " << path.string() << "\n";
}

}  // namespace

int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Single index and generalized linear model learners built on"
                 " slope-constrained isotonic regression"};
    app.name("isoglm");
    app.require_subcommand(1);

    // ---- fit ----
    FitConfig fit_cfg;
    std::string fit_algorithm = "lisotron";
    std::string fit_transfer = "sigmoid-rescaled";
    std::string fit_scaling = "unit-ball";
    std::string fit_out = "out";
    std::int64_t fit_iterations = 0;
    std::int64_t fit_cap = 0;
    CLI::App* fit = app.add_subcommand("fit", "Fit one model to a tabular dataset");
    fit->add_option("--dataset", fit_cfg.dataset_path, "Delimited numeric file with header row")
        ->required();
    fit->add_option("--target", fit_cfg.target_column, "Target column name or 0-based index")
        ->required();
    fit->add_option("--algorithm", fit_algorithm,
                    "One of lisotron|isotron|glmtron|linear|logistic|sim|mean")
        ->capture_default_str();
    fit->add_option("--transfer", fit_transfer,
                    "Transfer for glmtron: sigmoid-rescaled|ramp|clamp-identity")
        ->capture_default_str();
    fit->add_option("--iterations", fit_iterations,
                    "Iteration budget (default: ceil(2*sqrt(m)), capped at 500)")
        ->check(CLI::Range(std::int64_t{1}, std::int64_t{1000000}));
    fit->add_option("--seed", fit_cfg.seed, "Root seed")->capture_default_str();
    fit->add_option("--scaling", fit_scaling, "Feature scaling: unit-ball|none")
        ->capture_default_str();
    fit->add_option("--holdout-fraction", fit_cfg.holdout_fraction,
                    "Share of rows withheld for iterate selection")
        ->capture_default_str();
    fit->add_option("--lpav-cap", fit_cap, "Subsample cap for LPAV fits (0 = off)")
        ->capture_default_str();
    fit->add_option("--out", fit_out, "Output directory")->capture_default_str();

    // ---- experiment ----
    CLI::App* experiment = app.add_subcommand("experiment", "Run a cross-validated study");
    experiment->require_subcommand(1);

    SyntheticExperimentConfig syn_cfg;
    std::vector<std::string> syn_algorithms{"lisotron", "isotron"};
    std::string syn_out = "out";
    std::int64_t syn_iterations = 0;
    std::int64_t syn_cap = 0;
    CLI::App* synthetic = experiment->add_subcommand(
        "synthetic", "Sparse synthetic data: lisotron vs isotron overfitting study");
    synthetic->add_option("--dim", syn_cfg.d, "Feature dimension")->capture_default_str();
    synthetic->add_option("--samples", syn_cfg.m, "Rows per repeat")->capture_default_str();
    synthetic->add_option("--folds", syn_cfg.folds, "Cross-validation folds")
        ->capture_default_str();
    synthetic->add_option("--repeats", syn_cfg.repeats, "Independent repetitions")
        ->capture_default_str();
    synthetic->add_option("--iterations", syn_iterations, "Iteration budget (default: auto)")
        ->check(CLI::Range(std::int64_t{1}, std::int64_t{1000000}));
    synthetic->add_option("--seed", syn_cfg.seed, "Root seed")->capture_default_str();
    synthetic->add_option("--algorithms", syn_algorithms, "Comma-separated list, or 'all'")
        ->delimiter(',')
        ->capture_default_str();
    synthetic->add_option("--holdout-fraction", syn_cfg.holdout_fraction,
                          "Inner holdout share for iterate selection")
        ->capture_default_str();
    synthetic->add_option("--lpav-cap", syn_cap, "Subsample cap for LPAV fits (0 = off)")
        ->capture_default_str();
    synthetic->add_option("--out", syn_out, "Output directory")->capture_default_str();

    TabularExperimentConfig tab_cfg;
    std::vector<std::string> tab_algorithms{"all"};
    std::string tab_scaling = "unit-ball";
    std::string tab_out = "out";
    std::int64_t tab_iterations = 0;
    std::int64_t tab_cap = 0;
    CLI::App* tabular = experiment->add_subcommand(
        "tabular", "Cross-validated comparison on a delimited numeric file");
    tabular->add_option("--dataset", tab_cfg.dataset_path, "Delimited numeric file")->required();
    tabular->add_option("--target", tab_cfg.target_column, "Target column name or 0-based index")
        ->required();
    tabular->add_option("--folds", tab_cfg.folds, "Cross-validation folds")
        ->capture_default_str();
    tabular->add_option("--iterations", tab_iterations, "Iteration budget (default: auto)")
        ->check(CLI::Range(std::int64_t{1}, std::int64_t{1000000}));
    tabular->add_option("--seed", tab_cfg.seed, "Root seed")->capture_default_str();
    tabular->add_option("--algorithms", tab_algorithms, "Comma-separated list, or 'all'")
        ->delimiter(',')
        ->capture_default_str();
    tabular->add_option("--scaling", tab_scaling, "Feature scaling: unit-ball|none")
        ->capture_default_str();
    tabular->add_option("--holdout-fraction", tab_cfg.holdout_fraction,
                        "Inner holdout share for iterate selection")
        ->capture_default_str();
    tabular->add_option("--lpav-cap", tab_cap, "Subsample cap for LPAV fits (0 = off)")
        ->capture_default_str();
    tabular->add_option("--out", tab_out, "Output directory")->capture_default_str();

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        if (fit->parsed()) {
            const auto algorithm = algorithm_by_name(fit_algorithm);
            if (!algorithm) throw std::runtime_error("unknown algorithm '" + fit_algorithm + "'");
            fit_cfg.algorithm = *algorithm;
            const auto transfer = transfer_by_name(fit_transfer);
            if (!transfer) throw std::runtime_error("unknown transfer '" + fit_transfer + "'");
            fit_cfg.glmtron_transfer = *transfer;
            const auto scaling = scaling_by_name(fit_scaling);
            if (!scaling) throw std::runtime_error("unknown scaling '" + fit_scaling + "'");
            fit_cfg.scaling = *scaling;
            fit_cfg.iterations = static_cast<std::size_t>(fit_iterations);
            if (fit_cap > 0) fit_cfg.lpav_subsample_cap = static_cast<std::size_t>(fit_cap);

            const FitOutcome outcome = run_fit(fit_cfg);
            print_written(write_outputs(outcome, fit_out), out);
            out << "train mse " << outcome.train_error.mse << ", normalized "
                << outcome.train_error.normalized_mse << "\n";
        } else if (synthetic->parsed()) {
            syn_cfg.algorithms = parse_algorithm_list(syn_algorithms);
            syn_cfg.iterations = static_cast<std::size_t>(syn_iterations);
            if (syn_cap > 0) syn_cfg.lpav_subsample_cap = static_cast<std::size_t>(syn_cap);
            if (std::find(syn_cfg.algorithms.begin(), syn_cfg.algorithms.end(),
                          syn_cfg.reference) == syn_cfg.algorithms.end())
                syn_cfg.reference = syn_cfg.algorithms.front();

            const SyntheticExperimentOutcome outcome = run_synthetic_experiment(syn_cfg);
            print_written(write_outputs(outcome, syn_out), out);
            print_experiment_summary(outcome.aggregates, out);
        } else if (tabular->parsed()) {
            tab_cfg.algorithms = parse_algorithm_list(tab_algorithms);
            const auto scaling = scaling_by_name(tab_scaling);
            if (!scaling) throw std::runtime_error("unknown scaling '" + tab_scaling + "'");
            tab_cfg.scaling = *scaling;
            tab_cfg.iterations = static_cast<std::size_t>(tab_iterations);
            if (tab_cap > 0) tab_cfg.lpav_subsample_cap = static_cast<std::size_t>(tab_cap);
            if (std::find(tab_cfg.algorithms.begin(), tab_cfg.algorithms.end(),
                          tab_cfg.reference) == tab_cfg.algorithms.end())
                tab_cfg.reference = tab_cfg.algorithms.front();

            const TabularExperimentOutcome outcome = run_tabular_experiment(tab_cfg);
            if (outcome.rows_rejected > 0)
                out << "rejected " << outcome.rows_rejected << " unparsable rows\n";
            print_written(write_outputs(outcome, tab_out), out);
            print_experiment_summary(outcome.report, out);
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace isoglm
