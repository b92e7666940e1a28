#ifndef QCL_CORE_HPP
#define QCL_CORE_HPP

// Quantile kernel: the asymmetric component-wise distance
//
//   phi(z, theta, q) = (theta + (1-2 theta) 1[z <= q]) |z - q|
//                    = (1-theta)(q-z)  if z <= q
//                    = theta (z-q)     if z >  q
//
// together with the order-statistic empirical quantile and the empirical
// quantile loss whose minimizer it is.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace qcl {

class QuantileLevel {
  public:
    explicit QuantileLevel(double theta) : theta_(theta) {
        if (!(theta >= 0.0 && theta <= 1.0))
            throw std::invalid_argument("QuantileLevel: theta must be in [0,1]");
    }
    double value() const { return theta_; }

  private:
    double theta_;
};

// Ascending sample, NaN-free, nonempty. Rejecting NaN here keeps every
// downstream comparison meaningful.
class SortedSample {
  public:
    static SortedSample from_unsorted(std::vector<double> values) {
        std::sort(values.begin(), values.end());
        return SortedSample(std::move(values));
    }

    static SortedSample from_sorted(std::vector<double> values) {
        for (std::size_t i = 1; i < values.size(); ++i)
            if (!(values[i - 1] <= values[i]))
                throw std::invalid_argument("SortedSample: values not ascending");
        return SortedSample(std::move(values));
    }

    std::size_t size() const { return values_.size(); }
    const std::vector<double>& values() const { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }

  private:
    explicit SortedSample(std::vector<double> values) : values_(std::move(values)) {
        if (values_.empty()) throw std::invalid_argument("SortedSample: empty sample");
        for (double v : values_)
            if (std::isnan(v)) throw std::invalid_argument("SortedSample: NaN value");
    }

    std::vector<double> values_;
};

namespace detail {

// Hot-path form without the QuantileLevel wrapper; theta assumed valid.
inline double qdist(double z, double q, double theta) {
    return z <= q ? (1.0 - theta) * (q - z) : theta * (z - q);
}

// 1-based order-statistic index of the theta-quantile: ceil(n*theta), with
// theta = 0 mapped to 1. The 1e-9 backoff keeps grid values like 0.14 (whose
// product n*theta lands a hair above an integer in floating point) on the
// order statistic the exact rational arithmetic would select.
inline std::size_t quantile_index(std::size_t n, double theta) {
    double raw = std::ceil(static_cast<double>(n) * theta - 1e-9);
    if (raw < 1.0) return 1;
    auto idx = static_cast<std::size_t>(raw);
    return idx > n ? n : idx;
}

}  // namespace detail

inline double quantile_distance(double z, double q, QuantileLevel theta) {
    if (!std::isfinite(z) || !std::isfinite(q))
        throw std::invalid_argument("quantile_distance: non-finite input");
    return detail::qdist(z, q, theta.value());
}

// Left-continuous generalized inverse of the empirical CDF,
// inf{x : F_n(x) >= theta}; no interpolation.
inline double empirical_quantile(const SortedSample& sample, QuantileLevel theta) {
    return sample[detail::quantile_index(sample.size(), theta.value()) - 1];
}

inline double empirical_quantile_loss(const SortedSample& sample, double q,
                                      QuantileLevel theta) {
    if (!std::isfinite(q))
        throw std::invalid_argument("empirical_quantile_loss: non-finite q");
    double t = theta.value();
    double sum = 0.0;
    for (double x : sample.values()) sum += detail::qdist(x, q, t);
    return sum;
}

inline double class_score(std::span<const double> z, std::span<const double> quantiles,
                          QuantileLevel theta) {
    if (z.size() != quantiles.size() || z.empty())
        throw std::invalid_argument("class_score: dimension mismatch");
    double t = theta.value();
    double sum = 0.0;
    for (std::size_t j = 0; j < z.size(); ++j) {
        if (!std::isfinite(z[j]) || !std::isfinite(quantiles[j]))
            throw std::invalid_argument("class_score: non-finite input");
        sum += detail::qdist(z[j], quantiles[j], t);
    }
    return sum;
}

// Equispaced theta grid on [tau, 1-tau]; size 1 pins the midpoint.
inline std::vector<double> theta_grid(double tau, int size) {
    if (!(tau > 0.0 && tau < 0.5)) throw std::invalid_argument("theta_grid: tau must be in (0,0.5)");
    if (size < 1) throw std::invalid_argument("theta_grid: size must be >= 1");
    std::vector<double> grid(static_cast<std::size_t>(size));
    if (size == 1) {
        grid[0] = 0.5;
        return grid;
    }
    double span = 1.0 - 2.0 * tau;
    for (int i = 0; i < size; ++i)
        grid[static_cast<std::size_t>(i)] = tau + span * static_cast<double>(i) / (size - 1);
    return grid;
}

}  // namespace qcl

#endif  // QCL_CORE_HPP
