#ifndef QCL_CLASSIFIER_HPP
#define QCL_CLASSIFIER_HPP

// Training pipeline of the empirically optimal quantile classifier:
//
//   1. estimate column scales from the training set and divide,
//   2. estimate sign flips from class-averaged skewness and apply,
//   3. for every grid theta, compute per-class per-variable empirical
//      quantiles and the in-sample correct-classification rate psi_n(theta),
//   4. theta* = argmax psi_n, ties broken by a square-polynomial fit,
//   5. store the quantile matrix at theta*.
//
// Plus the centroid and median baselines and stratified cross-validation.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qcl/core.hpp"
#include "qcl/dataset.hpp"
#include "qcl/errors.hpp"
#include "qcl/skewness.hpp"
#include "qcl/standardize.hpp"
#include "qcl/theory.hpp"

namespace qcl {

struct FitConfig {
    double tau = 0.02;
    int grid_size = 49;
    std::optional<double> fixed_theta;  // pins the grid to a single value
    SkewnessMode skew_mode = SkewnessMode::none();
    Standardization standardization = Standardization::none();

    std::vector<double> thetas() const {
        validate();
        if (fixed_theta) return {*fixed_theta};
        return theta_grid(tau, grid_size);
    }

    void validate() const {
        if (!(tau > 0.0 && tau < 0.5)) throw config_error("tau must be in (0, 0.5)");
        if (grid_size < 2) throw config_error("grid size must be >= 2");
        if (fixed_theta && !(*fixed_theta >= tau && *fixed_theta <= 1.0 - tau))
            throw config_error("fixed theta must lie in [tau, 1-tau]");
    }
};

struct AccuracyCurve {
    std::vector<double> thetas;
    std::vector<double> psi;  // in-sample correct-classification rates, multiples of 1/n
};

struct QuantileModel {
    double theta_star = 0.5;
    int g = 0;
    int p = 0;
    std::vector<double> quantiles;  // g x p, row major, at theta_star
    std::vector<int> flips;         // +-1 per column
    std::vector<double> scales;     // > 0 per column
    AccuracyCurve curve;
    std::vector<int> class_ids;
    SkewnessMode skew_mode;
    Standardization standardization;
    double tau = 0.02;
    int grid_size = 49;
};

namespace detail {

// Per-class sorted columns of the transformed training data; quantile matrix
// lookups at any theta are then O(1) per entry.
struct SortedByClass {
    int g = 0, p = 0;
    std::vector<std::vector<double>> cols;  // g*p sorted vectors

    explicit SortedByClass(const Dataset& data) : g(data.g()), p(data.p()) {
        cols.reserve(static_cast<std::size_t>(g) * p);
        for (int k = 0; k < g; ++k)
            for (int j = 0; j < p; ++j) {
                auto col = data.class_column(k, j);
                std::sort(col.begin(), col.end());
                cols.push_back(std::move(col));
            }
    }

    void quantile_matrix(double theta, std::vector<double>& out) const {
        out.resize(static_cast<std::size_t>(g) * p);
        for (std::size_t i = 0; i < cols.size(); ++i)
            out[i] = cols[i][quantile_index(cols[i].size(), theta) - 1];
    }
};

inline int classify_point(std::span<const double> z, const std::vector<double>& qmat, int g,
                          int p, double theta, std::vector<double>& scores) {
    scores.resize(static_cast<std::size_t>(g));
    for (int k = 0; k < g; ++k) {
        const double* qrow = qmat.data() + static_cast<std::size_t>(k) * p;
        double sum = 0.0;
        for (int j = 0; j < p; ++j) sum += qdist(z[static_cast<std::size_t>(j)], qrow[j], theta);
        scores[static_cast<std::size_t>(k)] = sum;
    }
    return classify_scores(scores);
}

// Least-squares fit of psi ~ a + b*theta + c*theta^2 over the whole curve;
// returns fitted values. Thetas are centered first for conditioning.
inline std::vector<double> quadratic_fit(const std::vector<double>& thetas,
                                         const std::vector<double>& psi) {
    std::size_t n = thetas.size();
    double mean = 0.0;
    for (double t : thetas) mean += t;
    mean /= static_cast<double>(n);

    double s0 = static_cast<double>(n), s1 = 0, s2 = 0, s3 = 0, s4 = 0;
    double y0 = 0, y1 = 0, y2 = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double x = thetas[i] - mean;
        double x2 = x * x;
        s1 += x;
        s2 += x2;
        s3 += x2 * x;
        s4 += x2 * x2;
        y0 += psi[i];
        y1 += psi[i] * x;
        y2 += psi[i] * x2;
    }
    // 3x3 normal equations, Gaussian elimination with partial pivoting.
    double m[3][4] = {{s0, s1, s2, y0}, {s1, s2, s3, y1}, {s2, s3, s4, y2}};
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::fabs(m[r][col]) > std::fabs(m[piv][col])) piv = r;
        std::swap(m[col], m[piv]);
        if (std::fabs(m[col][col]) < 1e-300) continue;  // singular; coefficient stays 0
        for (int r = 0; r < 3; ++r) {
            if (r == col) continue;
            double f = m[r][col] / m[col][col];
            for (int cc = col; cc < 4; ++cc) m[r][cc] -= f * m[col][cc];
        }
    }
    double coef[3] = {0, 0, 0};
    for (int r = 0; r < 3; ++r)
        if (std::fabs(m[r][r]) >= 1e-300) coef[r] = m[r][3] / m[r][r];

    std::vector<double> fitted(n);
    for (std::size_t i = 0; i < n; ++i) {
        double x = thetas[i] - mean;
        fitted[i] = coef[0] + coef[1] * x + coef[2] * x * x;
    }
    return fitted;
}

}  // namespace detail

// Argmax of the curve; among tied maxima the grid point with the largest
// value under a square-polynomial fit of the full curve wins, and if the
// fitted values tie too (a flat or symmetric fit), the median-position tied
// point is taken.
inline double select_theta(const AccuracyCurve& curve, double tau) {
    std::size_t n = curve.thetas.size();
    if (n == 0 || curve.psi.size() != n)
        throw std::invalid_argument("select_theta: empty or inconsistent curve");

    double best = *std::max_element(curve.psi.begin(), curve.psi.end());
    std::vector<std::size_t> tied;
    for (std::size_t i = 0; i < n; ++i)
        if (curve.psi[i] == best) tied.push_back(i);
    if (tied.size() == 1) return curve.thetas[tied[0]];

    std::vector<std::size_t> cands;
    if (n >= 3) {
        auto fitted = detail::quadratic_fit(curve.thetas, curve.psi);
        double fbest = fitted[tied[0]];
        for (std::size_t i : tied) fbest = std::max(fbest, fitted[i]);
        const double eps = 1e-9 * std::max(1.0, std::fabs(fbest));
        for (std::size_t i : tied)
            if (fitted[i] >= fbest - eps) cands.push_back(i);
    } else {
        cands = tied;
    }
    double theta = curve.thetas[cands[(cands.size() - 1) / 2]];
    return std::clamp(theta, tau, 1.0 - tau);
}

inline QuantileModel fit(const Dataset& data, const FitConfig& config,
                         std::vector<std::string>* warnings = nullptr) {
    config.validate();
    std::size_t min_class = *std::min_element(data.class_counts().begin(), data.class_counts().end());
    if (min_class < 2) throw std::invalid_argument("fit: every class needs >= 2 observations");
    if (config.tau * static_cast<double>(min_class) < 1.0)
        detail::warn(warnings, "tau * (smallest class size) < 1; the tau-quantile is pinned to the class minimum");

    QuantileModel model;
    model.g = data.g();
    model.p = data.p();
    model.class_ids = data.class_ids();
    model.skew_mode = config.skew_mode;
    model.standardization = config.standardization;
    model.tau = config.tau;
    model.grid_size = config.grid_size;

    model.scales = compute_scales(data, config.standardization, warnings);
    Dataset scaled = data.transformed(model.scales, nullptr);
    model.flips = compute_sign_flips(scaled, config.skew_mode);
    Dataset transformed = apply_sign_flips(scaled, model.flips);

    detail::SortedByClass sorted(transformed);
    auto grid = config.thetas();
    model.curve.thetas = grid;
    model.curve.psi.resize(grid.size());

    std::vector<double> qmat;
    std::vector<double> scores;
    int n = transformed.n();
    for (std::size_t gi = 0; gi < grid.size(); ++gi) {
        sorted.quantile_matrix(grid[gi], qmat);
        int correct = 0;
        for (int i = 0; i < n; ++i) {
            int pred = detail::classify_point(transformed.row(i), qmat, model.g, model.p,
                                              grid[gi], scores);
            if (pred == transformed.labels()[static_cast<std::size_t>(i)]) ++correct;
        }
        model.curve.psi[gi] = static_cast<double>(correct) / n;
    }

    model.theta_star = select_theta(model.curve, config.tau);
    sorted.quantile_matrix(model.theta_star, model.quantiles);
    return model;
}

// Classifies a raw observation: the stored scales and flips are applied
// before scoring against the theta* quantile matrix. Two classes tie toward
// class 1, more classes tie toward the lowest index.
inline int predict(const QuantileModel& model, std::span<const double> z) {
    if (static_cast<int>(z.size()) != model.p)
        throw std::invalid_argument("predict: dimension mismatch");
    std::vector<double> t(z.size());
    for (std::size_t j = 0; j < z.size(); ++j) {
        if (!std::isfinite(z[j])) throw std::invalid_argument("predict: non-finite input");
        t[j] = model.flips[j] * (z[j] / model.scales[j]);
    }
    std::vector<double> scores;
    return detail::classify_point(t, model.quantiles, model.g, model.p, model.theta_star, scores);
}

inline std::vector<int> predict_all(const QuantileModel& model, const Dataset& data) {
    std::vector<int> out(static_cast<std::size_t>(data.n()));
    for (int i = 0; i < data.n(); ++i) out[static_cast<std::size_t>(i)] = predict(model, data.row(i));
    return out;
}

// Componentwise-mean baseline with squared Euclidean distances.
struct CentroidModel {
    int g = 0, p = 0;
    std::vector<double> centers;  // g x p

    int classify(std::span<const double> z) const {
        std::vector<double> d(static_cast<std::size_t>(g), 0.0);
        for (int k = 0; k < g; ++k) {
            const double* c = centers.data() + static_cast<std::size_t>(k) * p;
            for (int j = 0; j < p; ++j) {
                double diff = z[static_cast<std::size_t>(j)] - c[j];
                d[static_cast<std::size_t>(k)] += diff * diff;
            }
        }
        return detail::classify_scores(d);
    }
};

inline CentroidModel fit_centroid(const Dataset& train) {
    CentroidModel m{train.g(), train.p(), {}};
    m.centers.assign(static_cast<std::size_t>(m.g) * m.p, 0.0);
    for (int i = 0; i < train.n(); ++i) {
        auto z = train.row(i);
        double* c = m.centers.data() +
                    static_cast<std::size_t>(train.labels()[static_cast<std::size_t>(i)]) * m.p;
        for (int j = 0; j < m.p; ++j) c[j] += z[static_cast<std::size_t>(j)];
    }
    for (int k = 0; k < m.g; ++k)
        for (int j = 0; j < m.p; ++j)
            m.centers[static_cast<std::size_t>(k) * m.p + static_cast<std::size_t>(j)] /=
                static_cast<double>(train.class_counts()[static_cast<std::size_t>(k)]);
    return m;
}

// Componentwise-median baseline with L1 distances; the median is the
// order-statistic empirical quantile at 0.5.
struct MedianModel {
    int g = 0, p = 0;
    std::vector<double> medians;  // g x p

    int classify(std::span<const double> z) const {
        std::vector<double> d(static_cast<std::size_t>(g), 0.0);
        for (int k = 0; k < g; ++k) {
            const double* c = medians.data() + static_cast<std::size_t>(k) * p;
            for (int j = 0; j < p; ++j)
                d[static_cast<std::size_t>(k)] += std::fabs(z[static_cast<std::size_t>(j)] - c[j]);
        }
        return detail::classify_scores(d);
    }
};

inline MedianModel fit_median(const Dataset& train) {
    MedianModel m{train.g(), train.p(), {}};
    m.medians.reserve(static_cast<std::size_t>(m.g) * m.p);
    for (int k = 0; k < m.g; ++k)
        for (int j = 0; j < m.p; ++j) {
            auto col = train.class_column(k, j);
            std::sort(col.begin(), col.end());
            m.medians.push_back(col[detail::quantile_index(col.size(), 0.5) - 1]);
        }
    return m;
}

inline int centroid_classify(const Dataset& train, std::span<const double> z) {
    if (static_cast<int>(z.size()) != train.p())
        throw std::invalid_argument("centroid_classify: dimension mismatch");
    return fit_centroid(train).classify(z);
}

inline int median_classify(const Dataset& train, std::span<const double> z) {
    if (static_cast<int>(z.size()) != train.p())
        throw std::invalid_argument("median_classify: dimension mismatch");
    return fit_median(train).classify(z);
}

struct CvResult {
    double rate = 0.0;    // misclassification rate
    double stderr_ = 0.0;  // binomial sqrt(r(1-r)/n)
    std::vector<double> fold_thetas;
};

inline constexpr int kLeaveOneOut = 0;

// Stratified k-fold cross-validation (folds = kLeaveOneOut for LOO). Within
// each class, observations are dealt to folds round-robin in dataset order,
// so folds are deterministic and keep the class proportions. theta is
// selected independently inside every training fold.
inline CvResult cross_validate(const Dataset& data, const FitConfig& config, int folds) {
    int n = data.n();
    if (folds == kLeaveOneOut) folds = n;
    if (folds < 2 || folds > n) throw config_error("cross_validate: folds must be in [2, n]");

    std::vector<int> fold_of(static_cast<std::size_t>(n));
    std::vector<int> seen(static_cast<std::size_t>(data.g()), 0);
    for (int i = 0; i < n; ++i) {
        int k = data.labels()[static_cast<std::size_t>(i)];
        fold_of[static_cast<std::size_t>(i)] = seen[static_cast<std::size_t>(k)] % folds;
        ++seen[static_cast<std::size_t>(k)];
    }

    // Every training fold must keep at least 2 observations of every class.
    for (int f = 0; f < folds; ++f) {
        std::vector<int> remain(static_cast<std::size_t>(data.g()), 0);
        for (int i = 0; i < n; ++i)
            if (fold_of[static_cast<std::size_t>(i)] != f)
                ++remain[static_cast<std::size_t>(data.labels()[static_cast<std::size_t>(i)])];
        for (int k = 0; k < data.g(); ++k)
            if (remain[static_cast<std::size_t>(k)] < 2)
                throw config_error("cross_validate: fold " + std::to_string(f + 1) +
                                   " leaves class " + std::to_string(k) +
                                   " with fewer than 2 training observations");
    }

    CvResult result;
    result.fold_thetas.reserve(static_cast<std::size_t>(folds));
    int errors = 0;
    for (int f = 0; f < folds; ++f) {
        std::vector<double> feats;
        std::vector<int> labels;
        std::vector<int> heldout;
        for (int i = 0; i < n; ++i) {
            if (fold_of[static_cast<std::size_t>(i)] == f) {
                heldout.push_back(i);
            } else {
                auto z = data.row(i);
                feats.insert(feats.end(), z.begin(), z.end());
                labels.push_back(data.labels()[static_cast<std::size_t>(i)]);
            }
        }
        Dataset train(std::move(feats), std::move(labels), data.p(), data.class_ids());
        QuantileModel model = fit(train, config);
        result.fold_thetas.push_back(model.theta_star);
        for (int i : heldout)
            if (predict(model, data.row(i)) != data.labels()[static_cast<std::size_t>(i)]) ++errors;
    }
    result.rate = static_cast<double>(errors) / n;
    result.stderr_ = std::sqrt(result.rate * (1.0 - result.rate) / n);
    return result;
}

}  // namespace qcl

#endif  // QCL_CLASSIFIER_HPP
