#ifndef QCL_DISTRIBUTIONS_HPP
#define QCL_DISTRIBUTIONS_HPP

#include <cmath>
#include <functional>
#include <stdexcept>
#include <utility>

#include "qcl/rng.hpp"
#include "qcl/special.hpp"

namespace qcl {

// A univariate law given by its CDF, quantile function and a sampler.
// Samplers are inverse-CDF transforms of one unit draw, so one variate
// consumes exactly one stream output.
struct UnivariateDistribution {
    std::function<double(double)> cdf;
    std::function<double(double)> quantile;
    std::function<double(rng::Stream&)> sampler;

    double sample(rng::Stream& s) const { return sampler(s); }
};

inline UnivariateDistribution normal_distribution(double mu = 0.0, double sigma = 1.0) {
    if (!(sigma > 0.0)) throw std::invalid_argument("normal_distribution: sigma must be > 0");
    UnivariateDistribution d;
    d.cdf = [mu, sigma](double x) { return special::normal_cdf((x - mu) / sigma); };
    d.quantile = [mu, sigma](double t) { return mu + sigma * special::normal_quantile(t); };
    d.sampler = [q = d.quantile](rng::Stream& s) { return q(s.next_unit()); };
    return d;
}

inline UnivariateDistribution chi_squared_distribution(double k) {
    if (!(k > 0.0)) throw std::invalid_argument("chi_squared_distribution: k must be > 0");
    UnivariateDistribution d;
    d.cdf = [k](double x) { return special::chi_squared_cdf(x, k); };
    d.quantile = [k](double t) { return special::chi_squared_quantile(t, k); };
    d.sampler = [q = d.quantile](rng::Stream& s) { return q(s.next_unit()); };
    return d;
}

inline UnivariateDistribution exponential_distribution(double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("exponential_distribution: lambda must be > 0");
    UnivariateDistribution d;
    d.cdf = [lambda](double x) { return x <= 0.0 ? 0.0 : -std::expm1(-lambda * x); };
    d.quantile = [lambda](double t) {
        if (!(t > 0.0 && t < 1.0))
            throw std::invalid_argument("exponential quantile: t must be in (0,1)");
        return -std::log1p(-t) / lambda;
    };
    d.sampler = [q = d.quantile](rng::Stream& s) { return q(s.next_unit()); };
    return d;
}

// The same law translated by c.
inline UnivariateDistribution shifted(UnivariateDistribution base, double c) {
    UnivariateDistribution d;
    d.cdf = [f = base.cdf, c](double x) { return f(x - c); };
    d.quantile = [q = base.quantile, c](double t) { return q(t) + c; };
    d.sampler = [smp = base.sampler, c](rng::Stream& s) { return smp(s) + c; };
    return d;
}

}  // namespace qcl

#endif  // QCL_DISTRIBUTIONS_HPP
