#ifndef QCL_EXPERIMENT_HPP
#define QCL_EXPERIMENT_HPP

// Replication harness mirroring the simulation-study protocol: for every
// replication an independent train/test pair is generated (or one CSV pair is
// loaded), theta is selected on the training set, and the test
// misclassification rate of the quantile classifier and the requested
// baselines is recorded. Replications run on worker threads with seeds
// derived from the replication index, and results are aggregated in
// replication order, so the report is byte-identical for any worker count.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "qcl/classifier.hpp"
#include "qcl/csv.hpp"
#include "qcl/errors.hpp"
#include "qcl/model_io.hpp"
#include "qcl/simgen.hpp"
#include "qcl/standardize.hpp"

namespace qcl {

struct ExperimentConfig {
    std::optional<ScenarioSpec> scenario;  // per-replication seed is derived from master_seed
    std::string train_csv;                 // CSV mode: both paths set, replications = 1
    std::string test_csv;
    FitConfig fit;
    int replications = 20;
    bool baseline_centroid = true;
    bool baseline_median = true;
    std::uint64_t master_seed = 0;
    int workers = 1;

    void validate() const {
        fit.validate();
        if (replications < 1) throw config_error("replications must be >= 1");
        bool csv_mode = !train_csv.empty() || !test_csv.empty();
        if (csv_mode == scenario.has_value())
            throw config_error("configure exactly one of scenario or train/test CSV paths");
        if (csv_mode && (train_csv.empty() || test_csv.empty()))
            throw config_error("CSV mode needs both train and test paths");
        if (csv_mode && replications != 1)
            throw config_error("CSV mode evaluates one fixed pair; replications must be 1");
        if (scenario) scenario->validate();
    }
};

struct MethodStats {
    std::string method;
    double mean_error = 0.0;
    double sd_error = 0.0;
    bool has_theta = false;
    double mean_theta = 0.0;
    double sd_theta = 0.0;
};

struct ExperimentReport {
    // config echo
    std::string data_source;  // scenario name or "csv"
    int n = 0, p = 0;
    double relevant_fraction = 1.0;
    bool dependent = false;
    int replications = 0;
    std::uint64_t seed = 0;
    double tau = 0.02;
    int grid_size = 49;
    std::string skew_mode;
    std::string standardization;

    std::vector<MethodStats> rows;

    std::string to_text() const {
        std::ostringstream out;
        out << "qcl_report_version = 1\n";
        out << "data = " << data_source << "\n";
        out << "n = " << n << "\n";
        out << "p = " << p << "\n";
        out << "relevant_fraction = " << detail::fmt17(relevant_fraction) << "\n";
        out << "dependent = " << (dependent ? "true" : "false") << "\n";
        out << "replications = " << replications << "\n";
        out << "seed = " << seed << "\n";
        out << "tau = " << detail::fmt17(tau) << "\n";
        out << "grid_size = " << grid_size << "\n";
        out << "skew_mode = " << skew_mode << "\n";
        out << "standardization = " << standardization << "\n";
        out << "method,mean_error,sd_error,mean_theta,sd_theta\n";
        for (const auto& r : rows) {
            out << r.method << "," << detail::fmt17(r.mean_error) << ","
                << detail::fmt17(r.sd_error) << ",";
            if (r.has_theta)
                out << detail::fmt17(r.mean_theta) << "," << detail::fmt17(r.sd_theta);
            else
                out << ",";
            out << "\n";
        }
        return out.str();
    }
};

namespace detail {

struct RepOutcome {
    double qc_error = 0.0;
    double theta = 0.0;
    double centroid_error = 0.0;
    double median_error = 0.0;
};

inline double test_error(const std::vector<int>& pred, const Dataset& test) {
    int wrong = 0;
    for (int i = 0; i < test.n(); ++i)
        if (pred[static_cast<std::size_t>(i)] != test.labels()[static_cast<std::size_t>(i)]) ++wrong;
    return static_cast<double>(wrong) / test.n();
}

inline RepOutcome evaluate_pair(const Dataset& train, const Dataset& test,
                                const ExperimentConfig& config) {
    RepOutcome out;
    QuantileModel model = fit(train, config.fit);
    out.theta = model.theta_star;
    out.qc_error = test_error(predict_all(model, test), test);

    if (config.baseline_centroid || config.baseline_median) {
        // Baselines see the same standardization as the quantile classifier;
        // sign flips cannot change either baseline's distances.
        const Dataset* btrain = &train;
        const Dataset* btest = &test;
        std::optional<std::pair<Dataset, Dataset>> scaled;
        if (config.fit.standardization.kind != Standardization::Kind::none) {
            auto [tr, te, sc] = standardize(train, test, config.fit.standardization);
            scaled.emplace(std::move(tr), std::move(te));
            btrain = &scaled->first;
            btest = &scaled->second;
        }
        if (config.baseline_centroid) {
            CentroidModel cm = fit_centroid(*btrain);
            std::vector<int> pred(static_cast<std::size_t>(btest->n()));
            for (int i = 0; i < btest->n(); ++i)
                pred[static_cast<std::size_t>(i)] = cm.classify(btest->row(i));
            out.centroid_error = test_error(pred, *btest);
        }
        if (config.baseline_median) {
            MedianModel mm = fit_median(*btrain);
            std::vector<int> pred(static_cast<std::size_t>(btest->n()));
            for (int i = 0; i < btest->n(); ++i)
                pred[static_cast<std::size_t>(i)] = mm.classify(btest->row(i));
            out.median_error = test_error(pred, *btest);
        }
    }
    return out;
}

inline std::pair<double, double> mean_sd(const std::vector<double>& v) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    if (v.size() < 2) return {mean, 0.0};
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return {mean, std::sqrt(ss / static_cast<double>(v.size() - 1))};
}

}  // namespace detail

inline ExperimentReport run_experiment(const ExperimentConfig& config) {
    config.validate();
    int reps = config.replications;
    std::vector<detail::RepOutcome> outcomes(static_cast<std::size_t>(reps));

    ExperimentReport report;
    report.replications = reps;
    report.seed = config.master_seed;
    report.tau = config.fit.tau;
    report.grid_size = config.fit.grid_size;
    report.skew_mode = config.fit.skew_mode.to_string();
    report.standardization = config.fit.standardization.to_string();

    if (config.scenario) {
        const ScenarioSpec& base = *config.scenario;
        report.data_source = scenario_name(base.scenario);
        report.n = base.n;
        report.p = base.p;
        report.relevant_fraction = base.relevant_fraction;
        report.dependent = base.dependent;

        auto run_rep = [&](int r) {
            ScenarioSpec spec = base;
            spec.seed = rng::derive_seed(config.master_seed, static_cast<std::uint64_t>(r));
            auto [train, test] = generate(spec);
            outcomes[static_cast<std::size_t>(r)] = detail::evaluate_pair(train, test, config);
        };

        int workers = std::max(1, config.workers);
        if (workers == 1 || reps == 1) {
            for (int r = 0; r < reps; ++r) run_rep(r);
        } else {
            std::atomic<int> next{0};
            std::vector<std::thread> pool;
            std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
            for (int w = 0; w < workers; ++w)
                pool.emplace_back([&, w] {
                    try {
                        for (int r = next.fetch_add(1); r < reps; r = next.fetch_add(1)) run_rep(r);
                    } catch (...) {
                        errors[static_cast<std::size_t>(w)] = std::current_exception();
                    }
                });
            for (auto& th : pool) th.join();
            for (auto& e : errors)
                if (e) std::rethrow_exception(e);
        }
    } else {
        report.data_source = "csv";
        Dataset train = read_dataset(config.train_csv);
        Dataset test = read_dataset(config.test_csv);
        if (train.p() != test.p()) throw data_error("train/test column counts differ");
        if (train.class_ids() != test.class_ids())
            throw data_error("train/test label sets differ");
        report.n = train.n();
        report.p = train.p();
        outcomes[0] = detail::evaluate_pair(train, test, config);
    }

    std::vector<double> qc_err, thetas, cc_err, mc_err;
    for (const auto& o : outcomes) {
        qc_err.push_back(o.qc_error);
        thetas.push_back(o.theta);
        cc_err.push_back(o.centroid_error);
        mc_err.push_back(o.median_error);
    }
    auto [qm, qs] = detail::mean_sd(qc_err);
    auto [tm, ts] = detail::mean_sd(thetas);
    report.rows.push_back({"quantile", qm, qs, true, tm, ts});
    if (config.baseline_centroid) {
        auto [m, s] = detail::mean_sd(cc_err);
        report.rows.push_back({"centroid", m, s, false, 0.0, 0.0});
    }
    if (config.baseline_median) {
        auto [m, s] = detail::mean_sd(mc_err);
        report.rows.push_back({"median", m, s, false, 0.0, 0.0});
    }
    return report;
}

struct CvOutput {
    double rate = 0.0;
    double stderr_ = 0.0;
    double mean_theta = 0.0;
    std::vector<double> fold_thetas;
};

inline CvOutput run_cv(const Dataset& data, const FitConfig& config, int folds) {
    CvResult res = cross_validate(data, config, folds);
    CvOutput out;
    out.rate = res.rate;
    out.stderr_ = res.stderr_;
    out.fold_thetas = res.fold_thetas;
    auto [tm, ts] = detail::mean_sd(out.fold_thetas);
    (void)ts;
    out.mean_theta = tm;
    return out;
}

// One row per grid theta: in-sample rate and test error of the classifier
// pinned at that theta, plus constant reference columns (centroid and median
// test errors, and the train/test errors at the selected theta*), which plot
// as the horizontal lines of the usual theta-curve figure.
struct ThetaCurve {
    std::vector<double> thetas;
    std::vector<double> train_psi;
    std::vector<double> test_error;
    double centroid_test_error = 0.0;
    double median_test_error = 0.0;
    double theta_star = 0.0;
    double qc_train_error = 0.0;  // at theta*
    double qc_test_error = 0.0;   // at theta*

    std::string to_csv() const {
        std::ostringstream out;
        out << "theta,train_psi,test_error,centroid_test_error,median_test_error,"
               "theta_star,qc_train_error,qc_test_error\n";
        for (std::size_t i = 0; i < thetas.size(); ++i) {
            out << detail::fmt17(thetas[i]) << "," << detail::fmt17(train_psi[i]) << ","
                << detail::fmt17(test_error[i]) << "," << detail::fmt17(centroid_test_error)
                << "," << detail::fmt17(median_test_error) << "," << detail::fmt17(theta_star)
                << "," << detail::fmt17(qc_train_error) << "," << detail::fmt17(qc_test_error)
                << "\n";
        }
        return out.str();
    }
};

inline ThetaCurve emit_theta_curve(const Dataset& train, const Dataset& test,
                                   const FitConfig& config) {
    QuantileModel model = fit(train, config);
    ThetaCurve curve;
    curve.thetas = model.curve.thetas;
    curve.train_psi = model.curve.psi;
    curve.theta_star = model.theta_star;

    // Same transform for every theta; only the quantile matrix moves.
    Dataset ttrain = apply_sign_flips(train.transformed(model.scales, nullptr), model.flips);
    Dataset ttest = apply_sign_flips(test.transformed(model.scales, nullptr), model.flips);
    detail::SortedByClass sorted(ttrain);

    std::vector<double> qmat, scores;
    curve.test_error.resize(curve.thetas.size());
    for (std::size_t gi = 0; gi < curve.thetas.size(); ++gi) {
        sorted.quantile_matrix(curve.thetas[gi], qmat);
        int wrong = 0;
        for (int i = 0; i < ttest.n(); ++i) {
            int pred = detail::classify_point(ttest.row(i), qmat, model.g, model.p,
                                              curve.thetas[gi], scores);
            if (pred != ttest.labels()[static_cast<std::size_t>(i)]) ++wrong;
        }
        curve.test_error[gi] = static_cast<double>(wrong) / ttest.n();
    }

    curve.qc_test_error = detail::test_error(predict_all(model, test), test);
    double best_psi = 0.0;
    for (std::size_t gi = 0; gi < curve.thetas.size(); ++gi)
        if (curve.thetas[gi] == model.theta_star) best_psi = curve.train_psi[gi];
    curve.qc_train_error = 1.0 - best_psi;

    const Dataset* btrain = &train;
    const Dataset* btest = &test;
    std::optional<std::pair<Dataset, Dataset>> scaled;
    if (config.standardization.kind != Standardization::Kind::none) {
        auto [tr, te, sc] = standardize(train, test, config.standardization);
        scaled.emplace(std::move(tr), std::move(te));
        btrain = &scaled->first;
        btest = &scaled->second;
    }
    CentroidModel cm = fit_centroid(*btrain);
    MedianModel mm = fit_median(*btrain);
    int cw = 0, mw = 0;
    for (int i = 0; i < btest->n(); ++i) {
        int truth = btest->labels()[static_cast<std::size_t>(i)];
        if (cm.classify(btest->row(i)) != truth) ++cw;
        if (mm.classify(btest->row(i)) != truth) ++mw;
    }
    curve.centroid_test_error = static_cast<double>(cw) / btest->n();
    curve.median_test_error = static_cast<double>(mw) / btest->n();
    return curve;
}

}  // namespace qcl

#endif  // QCL_EXPERIMENT_HPP
