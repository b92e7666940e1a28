#ifndef QCL_STANDARDIZE_HPP
#define QCL_STANDARDIZE_HPP

// Column scaling schemes. Scales are always estimated from training data
// only; test data is divided by the same scales.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "qcl/core.hpp"
#include "qcl/dataset.hpp"
#include "qcl/errors.hpp"

namespace qcl {

struct Standardization {
    enum class Kind { none, pooled_within_var, range, iqr, group_map };

    Kind kind = Kind::none;
    std::vector<int> groups;  // group_map only: group id per column

    static Standardization none() { return {}; }
    static Standardization pooled_within_var() { return {Kind::pooled_within_var, {}}; }
    static Standardization range() { return {Kind::range, {}}; }
    static Standardization iqr() { return {Kind::iqr, {}}; }
    static Standardization group_map(std::vector<int> groups) {
        if (groups.empty()) throw std::invalid_argument("group_map: empty group assignment");
        return {Kind::group_map, std::move(groups)};
    }

    std::string to_string() const {
        switch (kind) {
            case Kind::none: return "none";
            case Kind::pooled_within_var: return "pooled_within_var";
            case Kind::range: return "range";
            case Kind::iqr: return "iqr";
            case Kind::group_map: return "group_map";
        }
        return "none";
    }

    static Standardization parse_kind(const std::string& s) {
        if (s == "none") return none();
        if (s == "pooled" || s == "pooled_within_var") return pooled_within_var();
        if (s == "range") return range();
        if (s == "iqr") return iqr();
        if (s == "group_map") return {Kind::group_map, {}};  // groups attached separately
        throw config_error("unknown standardization '" + s + "'");
    }
};

namespace detail {

inline void warn(std::vector<std::string>* warnings, const std::string& msg) {
    if (warnings) warnings->push_back(msg);
}

}  // namespace detail

// Per-column scales for the given scheme:
//   pooled_within_var  sqrt of the class-size-weighted mean of within-class
//                      variances (population divisors)
//   range              column max - min
//   iqr                column q(0.75) - q(0.25), order-statistic quantiles
//   group_map          one standard deviation per group, computed from all
//                      entries of all the group's columns stacked together
// Columns (or groups) with zero spread get scale 1; constant columns add the
// same score to every class anyway.
inline std::vector<double> compute_scales(const Dataset& train, const Standardization& mode,
                                          std::vector<std::string>* warnings = nullptr) {
    int p = train.p();
    std::vector<double> scales(static_cast<std::size_t>(p), 1.0);
    switch (mode.kind) {
        case Standardization::Kind::none:
            break;

        case Standardization::Kind::pooled_within_var: {
            for (int j = 0; j < p; ++j) {
                double pooled = 0.0;
                for (int k = 0; k < train.g(); ++k) {
                    auto col = train.class_column(k, j);
                    double mean = 0.0;
                    for (double v : col) mean += v;
                    mean /= static_cast<double>(col.size());
                    double var = 0.0;
                    for (double v : col) var += (v - mean) * (v - mean);
                    pooled += var;  // sum over classes of n_k * within-variance
                }
                pooled /= static_cast<double>(train.n());
                scales[static_cast<std::size_t>(j)] = std::sqrt(pooled);
            }
            break;
        }

        case Standardization::Kind::range: {
            for (int j = 0; j < p; ++j) {
                auto col = train.column(j);
                auto [mn, mx] = std::minmax_element(col.begin(), col.end());
                scales[static_cast<std::size_t>(j)] = *mx - *mn;
            }
            break;
        }

        case Standardization::Kind::iqr: {
            for (int j = 0; j < p; ++j) {
                auto s = SortedSample::from_unsorted(train.column(j));
                scales[static_cast<std::size_t>(j)] =
                    empirical_quantile(s, QuantileLevel(0.75)) -
                    empirical_quantile(s, QuantileLevel(0.25));
            }
            break;
        }

        case Standardization::Kind::group_map: {
            if (static_cast<int>(mode.groups.size()) != p)
                throw std::invalid_argument("compute_scales: group assignment length mismatch");
            int gmax = 0;
            for (int gid : mode.groups) {
                if (gid < 0) throw std::invalid_argument("compute_scales: negative group id");
                gmax = std::max(gmax, gid + 1);
            }
            std::vector<double> sum(static_cast<std::size_t>(gmax), 0.0);
            std::vector<long> count(static_cast<std::size_t>(gmax), 0);
            for (int j = 0; j < p; ++j) {
                auto gid = static_cast<std::size_t>(mode.groups[static_cast<std::size_t>(j)]);
                for (double v : train.column(j)) {
                    sum[gid] += v;
                    ++count[gid];
                }
            }
            std::vector<double> mean(static_cast<std::size_t>(gmax), 0.0);
            for (std::size_t u = 0; u < mean.size(); ++u)
                if (count[u] > 0) mean[u] = sum[u] / static_cast<double>(count[u]);
            std::vector<double> ss(static_cast<std::size_t>(gmax), 0.0);
            for (int j = 0; j < p; ++j) {
                auto gid = static_cast<std::size_t>(mode.groups[static_cast<std::size_t>(j)]);
                for (double v : train.column(j)) ss[gid] += (v - mean[gid]) * (v - mean[gid]);
            }
            std::vector<double> gsd(static_cast<std::size_t>(gmax), 1.0);
            for (std::size_t u = 0; u < gsd.size(); ++u)
                if (count[u] > 0) gsd[u] = std::sqrt(ss[u] / static_cast<double>(count[u]));
            for (int j = 0; j < p; ++j)
                scales[static_cast<std::size_t>(j)] =
                    gsd[static_cast<std::size_t>(mode.groups[static_cast<std::size_t>(j)])];
            break;
        }
    }

    for (int j = 0; j < p; ++j) {
        double& s = scales[static_cast<std::size_t>(j)];
        if (!(s > 0.0) || !std::isfinite(s)) {
            detail::warn(warnings, "column " + std::to_string(j + 1) +
                                       " has zero spread; scale set to 1");
            s = 1.0;
        }
    }
    return scales;
}

// Standardizes a train/test pair with scales from the training set.
inline std::tuple<Dataset, Dataset, std::vector<double>> standardize(
    const Dataset& train, const Dataset& test, const Standardization& mode,
    std::vector<std::string>* warnings = nullptr) {
    if (train.p() != test.p())
        throw std::invalid_argument("standardize: train/test dimension mismatch");
    auto scales = compute_scales(train, mode, warnings);
    return {train.transformed(scales, nullptr), test.transformed(scales, nullptr), scales};
}

}  // namespace qcl

#endif  // QCL_STANDARDIZE_HPP
