#ifndef QCL_THEORY_HPP
#define QCL_THEORY_HPP

// Theoretical correct-classification probability of the univariate quantile
// classifier under known class laws, plus a Monte Carlo estimate of the same
// quantity for arbitrary dimensions (where no closed form exists).

#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <thread>
#include <utility>
#include <vector>

#include "qcl/core.hpp"
#include "qcl/distributions.hpp"
#include "qcl/rng.hpp"

namespace qcl {

// Two univariate populations with prior pi0 for the first (pi1 = 1 - pi0).
struct UnivariateProblem {
    UnivariateDistribution p0;
    UnivariateDistribution p1;
    double pi0 = 0.5;
};

// Correct-classification probability at quantile level theta.
//
// With q0 = q0(theta), q1 = q1(theta):
//   q0 <= q1:  psi = pi0 F0(d) + pi1 (1 - F1(d)),  d = theta q0 + (1-theta) q1
//   q0 >  q1:  psi = pi1 F1(d) + pi0 (1 - F0(d)),  d = theta q1 + (1-theta) q0
inline double psi_exact(const UnivariateProblem& problem, QuantileLevel theta) {
    double t = theta.value();
    if (!(t > 0.0 && t < 1.0))
        throw std::invalid_argument("psi_exact: theta must be in (0,1)");
    double q0 = problem.p0.quantile(t);
    double q1 = problem.p1.quantile(t);
    double pi0 = problem.pi0;
    double pi1 = 1.0 - pi0;
    if (q0 <= q1) {
        double d = t * q0 + (1.0 - t) * q1;
        return pi0 * problem.p0.cdf(d) + pi1 * (1.0 - problem.p1.cdf(d));
    }
    double d = t * q1 + (1.0 - t) * q0;
    return pi1 * problem.p1.cdf(d) + pi0 * (1.0 - problem.p0.cdf(d));
}

// Closed form for Exp(lambda) vs Exp(lambda) + c:
//   psi(theta) = pi0 - (1-theta) e^{c lambda theta} (pi0 e^{-c lambda} - pi1)
inline double psi_exponential_shift(double lambda, double c, double pi0, QuantileLevel theta) {
    if (!(lambda > 0.0) || !(c > 0.0))
        throw std::invalid_argument("psi_exponential_shift: lambda and c must be > 0");
    double t = theta.value();
    double pi1 = 1.0 - pi0;
    return pi0 - (1.0 - t) * std::exp(c * lambda * t) * (pi0 * std::exp(-c * lambda) - pi1);
}

struct ThetaScanResult {
    double theta_star;
    double psi_star;
};

inline ThetaScanResult optimal_theta_scan(const UnivariateProblem& problem,
                                          std::span<const double> grid) {
    if (grid.empty()) throw std::invalid_argument("optimal_theta_scan: empty grid");
    ThetaScanResult best{grid[0], psi_exact(problem, QuantileLevel(grid[0]))};
    for (std::size_t i = 1; i < grid.size(); ++i) {
        double psi = psi_exact(problem, QuantileLevel(grid[i]));
        if (psi > best.psi_star) best = {grid[i], psi};
    }
    return best;
}

// Draws (label, z) pairs; label in 0..g-1.
using LabeledSampler = std::function<std::pair<int, std::vector<double>>(rng::Stream&)>;

struct MonteCarloEstimate {
    double estimate;
    double stderr_;
};

namespace detail {

// g = 2 follows the ">0 -> class 0, otherwise class 1" convention of the
// two-class rule; for g > 2 ties go to the lowest class index.
inline int classify_scores(std::span<const double> scores) {
    if (scores.size() == 2) return scores[0] < scores[1] ? 0 : 1;
    int best = 0;
    for (int k = 1; k < static_cast<int>(scores.size()); ++k)
        if (scores[static_cast<std::size_t>(k)] < scores[static_cast<std::size_t>(best)]) best = k;
    return best;
}

}  // namespace detail

// Monte Carlo estimate of the correct-classification rate under the supplied
// (true or estimated) g x p quantile matrix. Sample i draws from its own
// child stream, so the estimate is identical for any n_threads.
inline MonteCarloEstimate psi_monte_carlo(const LabeledSampler& generator,
                                          const std::vector<double>& quantiles, int g, int p,
                                          QuantileLevel theta, int n_samples,
                                          std::uint64_t rng_seed, int n_threads = 1) {
    if (g < 2 || p < 1 || quantiles.size() != static_cast<std::size_t>(g) * static_cast<std::size_t>(p))
        throw std::invalid_argument("psi_monte_carlo: quantile matrix shape mismatch");
    if (n_samples < 100) throw std::invalid_argument("psi_monte_carlo: n_samples must be >= 100");
    if (n_threads < 1) n_threads = 1;

    rng::Stream root(rng_seed);
    double t = theta.value();

    auto count_range = [&](int lo, int hi) {
        long correct = 0;
        std::vector<double> scores(static_cast<std::size_t>(g));
        for (int i = lo; i < hi; ++i) {
            rng::Stream s = root.child(static_cast<std::uint64_t>(i));
            auto [label, z] = generator(s);
            if (label < 0 || label >= g || static_cast<int>(z.size()) != p)
                throw std::invalid_argument("psi_monte_carlo: sampler output shape mismatch");
            for (int k = 0; k < g; ++k) {
                double sum = 0.0;
                const double* qrow = quantiles.data() + static_cast<std::size_t>(k) * p;
                for (int j = 0; j < p; ++j)
                    sum += detail::qdist(z[static_cast<std::size_t>(j)], qrow[j], t);
                scores[static_cast<std::size_t>(k)] = sum;
            }
            if (detail::classify_scores(scores) == label) ++correct;
        }
        return correct;
    };

    long correct = 0;
    if (n_threads == 1) {
        correct = count_range(0, n_samples);
    } else {
        std::vector<long> partial(static_cast<std::size_t>(n_threads), 0);
        std::vector<std::thread> pool;
        int chunk = (n_samples + n_threads - 1) / n_threads;
        for (int w = 0; w < n_threads; ++w) {
            int lo = w * chunk;
            int hi = std::min(n_samples, lo + chunk);
            pool.emplace_back([&, w, lo, hi] { partial[static_cast<std::size_t>(w)] = count_range(lo, hi); });
        }
        for (auto& th : pool) th.join();
        for (long c : partial) correct += c;
    }

    double rate = static_cast<double>(correct) / n_samples;
    double se = std::sqrt(rate * (1.0 - rate) / n_samples);
    return {rate, se};
}

// Labeled sampler for a two-class univariate problem: label ~ Bernoulli(pi1),
// then z from the class law. One child stream per sample (handled by the
// caller), two draws per sample.
inline LabeledSampler make_problem_sampler(const UnivariateProblem& problem) {
    return [problem](rng::Stream& s) {
        int label = s.next_unit() < problem.pi0 ? 0 : 1;
        double z = label == 0 ? problem.p0.sample(s) : problem.p1.sample(s);
        return std::make_pair(label, std::vector<double>{z});
    };
}

}  // namespace qcl

#endif  // QCL_THEORY_HPP
