#ifndef QCL_SKEWNESS_HPP
#define QCL_SKEWNESS_HPP

// Variable-wise skewness measurement and sign unification: variables whose
// class-averaged skewness is negative get multiplied by -1 so that all
// variables skew in the same (positive) direction before one theta is chosen
// for all of them.

#include <cmath>
#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qcl/core.hpp"
#include "qcl/dataset.hpp"
#include "qcl/errors.hpp"

namespace qcl {

struct SkewnessMode {
    enum class Kind { none, moment, quantile };

    Kind kind = Kind::none;
    double u = 0.75;  // quantile mode only; u = 3/4 is Galton's measure

    static SkewnessMode none() { return {Kind::none, 0.75}; }
    static SkewnessMode moment() { return {Kind::moment, 0.75}; }
    static SkewnessMode galton() { return {Kind::quantile, 0.75}; }
    static SkewnessMode quantile(double u) {
        if (!(u > 0.5 && u <= 1.0))
            throw std::invalid_argument("SkewnessMode: u must be in (0.5, 1]");
        return {Kind::quantile, u};
    }

    std::string to_string() const {
        switch (kind) {
            case Kind::none: return "none";
            case Kind::moment: return "moment";
            case Kind::quantile: {
                char buf[40];
                std::snprintf(buf, sizeof(buf), "quantile:%.17g", u);
                return buf;
            }
        }
        return "none";
    }

    static SkewnessMode parse(const std::string& s) {
        if (s == "none") return none();
        if (s == "moment") return moment();
        if (s == "galton") return galton();
        if (s.rfind("quantile:", 0) == 0) return quantile(std::stod(s.substr(9)));
        throw config_error("unknown skewness mode '" + s + "'");
    }
};

namespace detail {

inline std::optional<double> third_moment_or_nothing(const SortedSample& sample) {
    std::size_t n = sample.size();
    double mean = 0.0;
    for (double v : sample.values()) mean += v;
    mean /= static_cast<double>(n);
    double m2 = 0.0, m3 = 0.0;
    for (double v : sample.values()) {
        double d = v - mean;
        m2 += d * d;
        m3 += d * d * d;
    }
    m2 /= static_cast<double>(n);
    m3 /= static_cast<double>(n);
    if (m2 <= 0.0) return std::nullopt;
    return m3 / (m2 * std::sqrt(m2));
}

}  // namespace detail

// Conventional third standardized moment m3 / s^3, both central moments with
// divisor n (only the sign is consumed downstream, and divisor n keeps the
// value defined at n = 2).
inline double standardized_third_moment(const SortedSample& sample) {
    if (sample.size() < 2)
        throw std::invalid_argument("standardized_third_moment: need n >= 2");
    auto v = detail::third_moment_or_nothing(sample);
    if (!v) throw degenerate_sample_error("standardized_third_moment: zero variance");
    return *v;
}

// Hinkley's tau(u) = (q(u) + q(1-u) - 2 q(1/2)) / (q(u) - q(1-u)) from the
// empirical quantiles; bounded in [-1, 1] when the denominator is positive.
// A collapsed denominator yields 0 and sets *degenerate when provided.
inline double quantile_skewness(const SortedSample& sample, double u,
                                bool* degenerate = nullptr) {
    if (!(u > 0.5 && u <= 1.0))
        throw std::invalid_argument("quantile_skewness: u must be in (0.5, 1]");
    if (degenerate) *degenerate = false;
    double hi = empirical_quantile(sample, QuantileLevel(u));
    double lo = empirical_quantile(sample, QuantileLevel(1.0 - u));
    double mid = empirical_quantile(sample, QuantileLevel(0.5));
    double den = hi - lo;
    if (den <= 0.0) {
        if (degenerate) *degenerate = true;
        return 0.0;
    }
    return (hi + lo - 2.0 * mid) / den;
}

// Per-variable skewness computed separately within each class, then averaged
// over classes with equal weights regardless of class sizes. Degenerate
// within-class samples contribute 0.
inline std::vector<double> class_averaged_skewness(const Dataset& data, SkewnessMode mode) {
    if (mode.kind == SkewnessMode::Kind::none)
        throw std::invalid_argument("class_averaged_skewness: mode none has no measure");
    for (std::size_t c : data.class_counts())
        if (c < 2)
            throw std::invalid_argument("class_averaged_skewness: every class needs >= 2 observations");

    std::vector<double> avg(static_cast<std::size_t>(data.p()), 0.0);
    for (int k = 0; k < data.g(); ++k) {
        for (int j = 0; j < data.p(); ++j) {
            auto sample = SortedSample::from_unsorted(data.class_column(k, j));
            double s = 0.0;
            if (mode.kind == SkewnessMode::Kind::moment) {
                s = detail::third_moment_or_nothing(sample).value_or(0.0);
            } else {
                s = quantile_skewness(sample, mode.u);
            }
            avg[static_cast<std::size_t>(j)] += s;
        }
    }
    for (double& v : avg) v /= static_cast<double>(data.g());
    return avg;
}

// -1 where the class-averaged skewness is negative, +1 elsewhere (zero or
// degenerate skewness keeps +1).
inline std::vector<int> compute_sign_flips(const Dataset& data, SkewnessMode mode) {
    if (mode.kind == SkewnessMode::Kind::none)
        return std::vector<int>(static_cast<std::size_t>(data.p()), 1);
    auto skew = class_averaged_skewness(data, mode);
    std::vector<int> flips(skew.size());
    for (std::size_t j = 0; j < skew.size(); ++j) flips[j] = skew[j] < 0.0 ? -1 : 1;
    return flips;
}

inline Dataset apply_sign_flips(const Dataset& data, const std::vector<int>& flips) {
    if (static_cast<int>(flips.size()) != data.p())
        throw std::invalid_argument("apply_sign_flips: length mismatch");
    for (int f : flips)
        if (f != 1 && f != -1) throw std::invalid_argument("apply_sign_flips: entries must be +-1");
    std::vector<double> ones(static_cast<std::size_t>(data.p()), 1.0);
    return data.transformed(ones, &flips);
}

}  // namespace qcl

#endif  // QCL_SKEWNESS_HPP
