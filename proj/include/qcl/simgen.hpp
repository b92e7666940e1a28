#ifndef QCL_SIMGEN_HPP
#define QCL_SIMGEN_HPP

// Reproducible generators for the four simulation scenarios:
//
//   t3_shift         W ~ t with 3 df,     X = W,        Y = W + 0.5
//   lognormal_shift  W ~ N(0,1),          X = exp(W),   Y = exp(W) + 0.2
//   mixed_blocks     W ~ N(0,1), five balanced column blocks
//                    (w, exp w, log|w|, w^2, sqrt|w|), shift 0.2 added after
//                    the transformation
//   beta_random      per class and variable, Beta(a,b) with a,b ~ U(0.1,10),
//                    centered by the exact mean a/(a+b)
//
// Classes are balanced (n/2 each, class 0 first). The first
// ceil(p * relevant_fraction) columns carry the class shift (or the
// class-specific Beta law); the remaining noise columns use the same base
// distribution without the shift (beta_random: one fresh parameter pair per
// noise column, shared by both classes). Dependence (scenarios 1-3) is a
// latent equicorrelated Gaussian, rho = 0.2, realized through the one-factor
// representation W = sqrt(rho) G + sqrt(1-rho) E over the relevant columns;
// noise columns are always independent.
//
// Stream layout under the spec seed (see rng.hpp for the algorithm):
//   root.child(0)            beta parameter stream (shared by both splits)
//   root.child(1)/(2)        train/test split roots
//   split.child(0).child(i)  per-row shared factor draw
//   split.child(1+j).child(i)  draws for cell (row i, column j)

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qcl/dataset.hpp"
#include "qcl/errors.hpp"
#include "qcl/rng.hpp"

namespace qcl {

enum class Scenario { t3_shift, lognormal_shift, mixed_blocks, beta_random };

inline std::string scenario_name(Scenario s) {
    switch (s) {
        case Scenario::t3_shift: return "t3_shift";
        case Scenario::lognormal_shift: return "lognormal_shift";
        case Scenario::mixed_blocks: return "mixed_blocks";
        case Scenario::beta_random: return "beta_random";
    }
    return "t3_shift";
}

inline Scenario scenario_parse(const std::string& s) {
    if (s == "t3_shift" || s == "1") return Scenario::t3_shift;
    if (s == "lognormal_shift" || s == "2") return Scenario::lognormal_shift;
    if (s == "mixed_blocks" || s == "3") return Scenario::mixed_blocks;
    if (s == "beta_random" || s == "4") return Scenario::beta_random;
    throw config_error("unknown scenario '" + s + "'");
}

struct ScenarioSpec {
    Scenario scenario = Scenario::t3_shift;
    int n = 100;
    int p = 10;
    double relevant_fraction = 1.0;  // one of 1.0, 0.5, 0.1
    bool dependent = false;
    std::uint64_t seed = 0;

    int relevant_count() const {
        return static_cast<int>(std::ceil(static_cast<double>(p) * relevant_fraction));
    }

    void validate() const {
        if (n < 4 || n % 2 != 0) throw config_error("scenario n must be even and >= 4");
        if (p < 1) throw config_error("scenario p must be >= 1");
        if (relevant_fraction != 1.0 && relevant_fraction != 0.5 && relevant_fraction != 0.1)
            throw config_error("relevant fraction must be 1.0, 0.5 or 0.1");
        if (scenario == Scenario::beta_random && dependent)
            throw config_error("the beta scenario has no dependent variant");
    }
};

namespace detail {

inline constexpr double kRho = 0.2;

inline double block_transform(int block, double w) {
    switch (block) {
        case 0: return w;
        case 1: return std::exp(w);
        case 2: {
            double a = std::fabs(w);
            if (a < 1e-300) a = 1e-300;  // a latent draw of exactly 0 would give -inf
            return std::log(a);
        }
        case 3: return w * w;
        default: return std::sqrt(std::fabs(w));
    }
}

struct BetaParams {
    double a0, b0, a1, b1;  // noise columns use a0,b0 for both classes
};

inline Dataset generate_split(const ScenarioSpec& spec, rng::Stream split,
                              const std::vector<BetaParams>& beta_params) {
    const int n = spec.n, p = spec.p;
    const int half = n / 2;
    const int relevant = spec.relevant_count();
    const double sqrt_rho = std::sqrt(kRho);
    const double sqrt_1mrho = std::sqrt(1.0 - kRho);

    std::vector<int> labels(static_cast<std::size_t>(n));
    for (int i = half; i < n; ++i) labels[static_cast<std::size_t>(i)] = 1;

    std::vector<double> factor;
    if (spec.dependent) {
        rng::Stream fs = split.child(0);
        factor.resize(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i)
            factor[static_cast<std::size_t>(i)] = fs.child(static_cast<std::uint64_t>(i)).normal();
    }

    std::vector<double> features(static_cast<std::size_t>(n) * p);
    for (int j = 0; j < p; ++j) {
        rng::Stream col = split.child(static_cast<std::uint64_t>(1 + j));
        const bool is_relevant = j < relevant;
        for (int i = 0; i < n; ++i) {
            rng::Stream cell = col.child(static_cast<std::uint64_t>(i));
            const int y = labels[static_cast<std::size_t>(i)];
            double v;
            if (spec.scenario == Scenario::beta_random) {
                const BetaParams& bp = beta_params[static_cast<std::size_t>(j)];
                double a = (is_relevant && y == 1) ? bp.a1 : bp.a0;
                double b = (is_relevant && y == 1) ? bp.b1 : bp.b0;
                v = cell.beta(a, b) - a / (a + b);
            } else {
                double w;
                if (spec.dependent && is_relevant) {
                    w = sqrt_rho * factor[static_cast<std::size_t>(i)] + sqrt_1mrho * cell.normal();
                } else {
                    w = cell.normal();
                }
                switch (spec.scenario) {
                    case Scenario::t3_shift: {
                        double c1 = cell.normal(), c2 = cell.normal(), c3 = cell.normal();
                        v = w / std::sqrt((c1 * c1 + c2 * c2 + c3 * c3) / 3.0);
                        if (is_relevant && y == 1) v += 0.5;
                        break;
                    }
                    case Scenario::lognormal_shift:
                        v = std::exp(w);
                        if (is_relevant && y == 1) v += 0.2;
                        break;
                    default: {  // mixed_blocks
                        int block = static_cast<int>((static_cast<long>(j) * 5) / p);
                        v = block_transform(block, w);
                        if (is_relevant && y == 1) v += 0.2;
                        break;
                    }
                }
            }
            features[static_cast<std::size_t>(i) * p + static_cast<std::size_t>(j)] = v;
        }
    }
    return Dataset(std::move(features), std::move(labels), p);
}

}  // namespace detail

inline std::pair<Dataset, Dataset> generate(const ScenarioSpec& spec) {
    spec.validate();
    rng::Stream root(spec.seed);

    std::vector<detail::BetaParams> beta_params;
    if (spec.scenario == Scenario::beta_random) {
        rng::Stream params = root.child(0);
        const int relevant = spec.relevant_count();
        beta_params.resize(static_cast<std::size_t>(spec.p));
        for (int j = 0; j < spec.p; ++j) {
            rng::Stream pj = params.child(static_cast<std::uint64_t>(j));
            detail::BetaParams bp{};
            bp.a0 = pj.uniform(0.1, 10.0);
            bp.b0 = pj.uniform(0.1, 10.0);
            if (j < relevant) {
                bp.a1 = pj.uniform(0.1, 10.0);
                bp.b1 = pj.uniform(0.1, 10.0);
            } else {
                bp.a1 = bp.a0;
                bp.b1 = bp.b0;
            }
            beta_params[static_cast<std::size_t>(j)] = bp;
        }
    }

    Dataset train = detail::generate_split(spec, root.child(1), beta_params);
    Dataset test = detail::generate_split(spec, root.child(2), beta_params);
    return {std::move(train), std::move(test)};
}

}  // namespace qcl

#endif  // QCL_SIMGEN_HPP
