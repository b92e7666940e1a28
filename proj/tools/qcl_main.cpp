// qcl — component-wise quantile classifier CLI.
//
// Subcommands: fit, predict, cv, simulate, experiment, theory, curve.
// Exit codes: 0 success, 2 configuration error, 3 data error.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qcl/qcl.hpp"

namespace {

struct FitFlags {
    double tau = 0.02;
    int grid = 49;
    std::string skew = "none";
    std::string standardize = "none";
    std::optional<double> theta;
};

void add_fit_flags(CLI::App* cmd, FitFlags& f) {
    cmd->add_option("--tau", f.tau, "theta search interval is [tau, 1-tau]")
        ->capture_default_str();
    cmd->add_option("--grid", f.grid, "number of equispaced grid points")
        ->capture_default_str();
    cmd->add_option("--skew", f.skew, "skewness correction: none|moment|galton|quantile:<u>")
        ->capture_default_str();
    cmd->add_option("--standardize", f.standardize,
                    "column scaling: none|pooled|range|iqr|groups:<file>")
        ->capture_default_str();
    cmd->add_option("--theta", f.theta, "pin theta instead of selecting it on the grid");
}

std::vector<int> read_group_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw qcl::data_error("cannot open group file: " + path);
    std::vector<int> groups;
    int gid;
    while (in >> gid) groups.push_back(gid);
    if (groups.empty()) throw qcl::data_error("group file is empty: " + path);
    return groups;
}

qcl::FitConfig make_fit_config(const FitFlags& f) {
    qcl::FitConfig config;
    config.tau = f.tau;
    config.grid_size = f.grid;
    config.fixed_theta = f.theta;
    config.skew_mode = qcl::SkewnessMode::parse(f.skew);
    if (f.standardize.rfind("groups:", 0) == 0) {
        config.standardization = qcl::Standardization::group_map(read_group_file(f.standardize.substr(7)));
    } else {
        config.standardization = qcl::Standardization::parse_kind(f.standardize);
    }
    config.validate();
    return config;
}

void print_warnings(const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw qcl::data_error("cannot open for writing: " + path);
    out << text;
    if (!out) throw qcl::data_error("failed writing: " + path);
}

int parse_folds(const std::string& s) {
    if (s == "loo") return qcl::kLeaveOneOut;
    try {
        return std::stoi(s);
    } catch (...) {
        throw qcl::config_error("--folds expects 'loo' or an integer, got '" + s + "'");
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"component-wise quantile classifier"};
    app.require_subcommand(1);
    app.set_config("--config", "", "flat key=value config file; command-line flags win");
    app.fallthrough();  // lets --config appear after the subcommand name

    // ---- fit ----
    auto* fit_cmd = app.add_subcommand("fit", "fit a model on a training CSV");
    FitFlags fit_flags;
    std::string fit_train, fit_out;
    fit_cmd->add_option("--train", fit_train, "training CSV (y,x1,...,xp)")->required();
    fit_cmd->add_option("--out", fit_out, "model output path")->required();
    add_fit_flags(fit_cmd, fit_flags);

    // ---- predict ----
    auto* predict_cmd = app.add_subcommand("predict", "classify rows of a CSV with a fitted model");
    std::string pr_model, pr_data, pr_out;
    predict_cmd->add_option("--model", pr_model, "model file from 'fit'")->required();
    predict_cmd->add_option("--data", pr_data, "CSV to classify (label column is ignored)")->required();
    predict_cmd->add_option("--out", pr_out, "write one predicted label per line");

    // ---- cv ----
    auto* cv_cmd = app.add_subcommand("cv", "cross-validated misclassification rate");
    FitFlags cv_flags;
    std::string cv_data, cv_folds = "loo", cv_out;
    cv_cmd->add_option("--data", cv_data, "labeled CSV")->required();
    cv_cmd->add_option("--folds", cv_folds, "loo (default) or a fold count")->capture_default_str();
    cv_cmd->add_option("--out", cv_out, "write per-fold selected thetas as CSV");
    add_fit_flags(cv_cmd, cv_flags);

    // ---- simulate ----
    auto* sim_cmd = app.add_subcommand("simulate", "write a train/test pair for a scenario");
    std::string sim_scenario = "t3_shift", sim_out = "scenario";
    int sim_n = 100, sim_p = 10;
    double sim_frac = 1.0;
    bool sim_dep = false;
    std::uint64_t sim_seed = 0;
    sim_cmd->add_option("--scenario", sim_scenario,
                        "t3_shift|lognormal_shift|mixed_blocks|beta_random (or 1-4)")
        ->capture_default_str();
    sim_cmd->add_option("--n", sim_n, "observations per set (even)")->capture_default_str();
    sim_cmd->add_option("--p", sim_p, "variables")->capture_default_str();
    sim_cmd->add_option("--frac", sim_frac, "relevant fraction: 1.0, 0.5 or 0.1")->capture_default_str();
    sim_cmd->add_flag("--dependent", sim_dep, "equicorrelated latent Gaussian (rho = 0.2)");
    sim_cmd->add_option("--seed", sim_seed, "generator seed")->capture_default_str();
    sim_cmd->add_option("--out", sim_out, "output prefix: <out>_train.csv, <out>_test.csv")
        ->capture_default_str();

    // ---- experiment ----
    auto* exp_cmd = app.add_subcommand("experiment", "replicated train/test study with baselines");
    FitFlags exp_flags;
    std::string exp_scenario, exp_train, exp_test, exp_out, exp_baselines = "centroid,median";
    int exp_n = 100, exp_p = 10, exp_reps = 20, exp_workers = 1;
    double exp_frac = 1.0;
    bool exp_dep = false;
    std::uint64_t exp_seed = 0;
    exp_cmd->add_option("--scenario", exp_scenario, "scenario name (omit when using CSV input)");
    exp_cmd->add_option("--train", exp_train, "training CSV (CSV mode)");
    exp_cmd->add_option("--test", exp_test, "test CSV (CSV mode)");
    exp_cmd->add_option("--n", exp_n)->capture_default_str();
    exp_cmd->add_option("--p", exp_p)->capture_default_str();
    exp_cmd->add_option("--frac", exp_frac)->capture_default_str();
    exp_cmd->add_flag("--dependent", exp_dep);
    exp_cmd->add_option("--reps", exp_reps, "replications")->capture_default_str();
    exp_cmd->add_option("--seed", exp_seed, "master seed")->capture_default_str();
    exp_cmd->add_option("--workers", exp_workers, "worker threads (report is identical for any count)")
        ->capture_default_str();
    exp_cmd->add_option("--baselines", exp_baselines, "subset of centroid,median (or 'none')")
        ->capture_default_str();
    exp_cmd->add_option("--out", exp_out, "also write the report to this path");
    add_fit_flags(exp_cmd, exp_flags);

    // ---- theory ----
    auto* th_cmd = app.add_subcommand("theory", "theoretical (theta, psi, 1-psi) curve as CSV");
    std::string th_problem = "gaussian_shift", th_out;
    int th_grid = 199;
    double th_tau = 0.005, th_pi0 = 0.5;
    double th_shift = 1.0, th_lambda = 1.0, th_c = 0.5, th_df = 5.0, th_chishift = 2.0;
    th_cmd->add_option("--problem", th_problem,
                       "gaussian_shift|chisq_shift|exponential_shift|normal_vs_chisq")
        ->capture_default_str();
    th_cmd->add_option("--grid", th_grid)->capture_default_str();
    th_cmd->add_option("--tau", th_tau)->capture_default_str();
    th_cmd->add_option("--pi0", th_pi0)->capture_default_str();
    th_cmd->add_option("--shift", th_shift, "gaussian_shift location shift")->capture_default_str();
    th_cmd->add_option("--lambda", th_lambda, "exponential rate")->capture_default_str();
    th_cmd->add_option("--c", th_c, "exponential location shift")->capture_default_str();
    th_cmd->add_option("--df", th_df, "chi-squared degrees of freedom")->capture_default_str();
    th_cmd->add_option("--chi-shift", th_chishift, "chisq_shift location shift")->capture_default_str();
    th_cmd->add_option("--out", th_out, "output CSV (stdout when omitted)");

    // ---- curve ----
    auto* cu_cmd = app.add_subcommand("curve", "train psi_n and test error over the theta grid");
    FitFlags cu_flags;
    std::string cu_train, cu_test, cu_scenario, cu_out;
    int cu_n = 100, cu_p = 10;
    double cu_frac = 1.0;
    bool cu_dep = false;
    std::uint64_t cu_seed = 0;
    cu_cmd->add_option("--train", cu_train, "training CSV (CSV mode)");
    cu_cmd->add_option("--test", cu_test, "test CSV (CSV mode)");
    cu_cmd->add_option("--scenario", cu_scenario, "scenario name (generator mode)");
    cu_cmd->add_option("--n", cu_n)->capture_default_str();
    cu_cmd->add_option("--p", cu_p)->capture_default_str();
    cu_cmd->add_option("--frac", cu_frac)->capture_default_str();
    cu_cmd->add_flag("--dependent", cu_dep);
    cu_cmd->add_option("--seed", cu_seed)->capture_default_str();
    cu_cmd->add_option("--out", cu_out, "output CSV (stdout when omitted)");
    add_fit_flags(cu_cmd, cu_flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (fit_cmd->parsed()) {
            qcl::Dataset train = qcl::read_dataset(fit_train);
            std::vector<std::string> warnings;
            qcl::QuantileModel model = qcl::fit(train, make_fit_config(fit_flags), &warnings);
            print_warnings(warnings);
            qcl::save_model(model, fit_out);
            std::cout << "theta_star = " << qcl::detail::fmt17(model.theta_star) << "\n";
            std::cout << "train_accuracy = "
                      << qcl::detail::fmt17(*std::max_element(model.curve.psi.begin(),
                                                              model.curve.psi.end()))
                      << "\n";
        } else if (predict_cmd->parsed()) {
            qcl::QuantileModel model = qcl::load_model(pr_model);
            qcl::Dataset data = qcl::read_dataset(pr_data);
            if (data.p() != model.p)
                throw qcl::data_error("data has " + std::to_string(data.p()) +
                                      " columns, model expects " + std::to_string(model.p));
            std::ostringstream lines;
            for (int i = 0; i < data.n(); ++i) {
                int k = qcl::predict(model, data.row(i));
                lines << model.class_ids[static_cast<std::size_t>(k)] << "\n";
            }
            if (pr_out.empty())
                std::cout << lines.str();
            else
                write_text_file(pr_out, lines.str());
        } else if (cv_cmd->parsed()) {
            qcl::Dataset data = qcl::read_dataset(cv_data);
            qcl::CvOutput out = qcl::run_cv(data, make_fit_config(cv_flags), parse_folds(cv_folds));
            std::cout << "rate = " << qcl::detail::fmt17(out.rate) << "\n";
            std::cout << "stderr = " << qcl::detail::fmt17(out.stderr_) << "\n";
            std::cout << "mean_theta = " << qcl::detail::fmt17(out.mean_theta) << "\n";
            if (!cv_out.empty()) {
                std::ostringstream csv;
                csv << "fold,theta\n";
                for (std::size_t f = 0; f < out.fold_thetas.size(); ++f)
                    csv << (f + 1) << "," << qcl::detail::fmt17(out.fold_thetas[f]) << "\n";
                write_text_file(cv_out, csv.str());
            }
        } else if (sim_cmd->parsed()) {
            qcl::ScenarioSpec spec{qcl::scenario_parse(sim_scenario), sim_n, sim_p,
                                   sim_frac, sim_dep, sim_seed};
            auto [train, test] = qcl::generate(spec);
            qcl::write_dataset(sim_out + "_train.csv", train);
            qcl::write_dataset(sim_out + "_test.csv", test);
            std::cout << "wrote " << sim_out << "_train.csv and " << sim_out << "_test.csv\n";
        } else if (exp_cmd->parsed()) {
            qcl::ExperimentConfig config;
            config.fit = make_fit_config(exp_flags);
            config.replications = exp_reps;
            config.master_seed = exp_seed;
            config.workers = exp_workers;
            config.baseline_centroid = exp_baselines.find("centroid") != std::string::npos;
            config.baseline_median = exp_baselines.find("median") != std::string::npos;
            if (!exp_scenario.empty()) {
                config.scenario = qcl::ScenarioSpec{qcl::scenario_parse(exp_scenario), exp_n,
                                                    exp_p, exp_frac, exp_dep, 0};
            } else {
                config.train_csv = exp_train;
                config.test_csv = exp_test;
            }
            qcl::ExperimentReport report = qcl::run_experiment(config);
            std::string text = report.to_text();
            std::cout << text;
            if (!exp_out.empty()) write_text_file(exp_out, text);
        } else if (th_cmd->parsed()) {
            qcl::UnivariateProblem problem;
            problem.pi0 = th_pi0;
            if (th_problem == "gaussian_shift") {
                problem.p0 = qcl::normal_distribution(0.0, 1.0);
                problem.p1 = qcl::normal_distribution(th_shift, 1.0);
            } else if (th_problem == "chisq_shift") {
                problem.p0 = qcl::chi_squared_distribution(th_df);
                problem.p1 = qcl::shifted(qcl::chi_squared_distribution(th_df), th_chishift);
            } else if (th_problem == "exponential_shift") {
                problem.p0 = qcl::exponential_distribution(th_lambda);
                problem.p1 = qcl::shifted(qcl::exponential_distribution(th_lambda), th_c);
            } else if (th_problem == "normal_vs_chisq") {
                problem.p0 = qcl::normal_distribution(5.0, 1.0);
                problem.p1 = qcl::chi_squared_distribution(4.0);
            } else {
                throw qcl::config_error("unknown theory problem '" + th_problem + "'");
            }
            auto grid = qcl::theta_grid(th_tau, th_grid);
            std::ostringstream csv;
            csv << "theta,psi,misclassification\n";
            for (double t : grid) {
                double psi = qcl::psi_exact(problem, qcl::QuantileLevel(t));
                csv << qcl::detail::fmt17(t) << "," << qcl::detail::fmt17(psi) << ","
                    << qcl::detail::fmt17(1.0 - psi) << "\n";
            }
            auto best = qcl::optimal_theta_scan(problem, grid);
            std::cerr << "theta_star = " << qcl::detail::fmt17(best.theta_star)
                      << "  psi_star = " << qcl::detail::fmt17(best.psi_star) << "\n";
            if (th_out.empty())
                std::cout << csv.str();
            else
                write_text_file(th_out, csv.str());
        } else if (cu_cmd->parsed()) {
            std::optional<qcl::Dataset> train, test;
            if (!cu_scenario.empty()) {
                qcl::ScenarioSpec spec{qcl::scenario_parse(cu_scenario), cu_n, cu_p,
                                       cu_frac, cu_dep, cu_seed};
                auto pair = qcl::generate(spec);
                train.emplace(std::move(pair.first));
                test.emplace(std::move(pair.second));
            } else {
                if (cu_train.empty() || cu_test.empty())
                    throw qcl::config_error("curve needs either --scenario or --train and --test");
                train.emplace(qcl::read_dataset(cu_train));
                test.emplace(qcl::read_dataset(cu_test));
            }
            qcl::ThetaCurve curve = qcl::emit_theta_curve(*train, *test, make_fit_config(cu_flags));
            if (cu_out.empty())
                std::cout << curve.to_csv();
            else
                write_text_file(cu_out, curve.to_csv());
        }
    } catch (const qcl::data_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const qcl::config_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
