#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "qcl/distributions.hpp"
#include "qcl/theory.hpp"

using qcl::QuantileLevel;
using qcl::UnivariateProblem;

namespace {

UnivariateProblem gaussian_shift(double shift = 1.0, double pi0 = 0.5) {
    return {qcl::normal_distribution(0, 1), qcl::normal_distribution(shift, 1), pi0};
}

UnivariateProblem exponential_shift(double lambda = 1.0, double c = 0.5, double pi0 = 0.5) {
    return {qcl::exponential_distribution(lambda),
            qcl::shifted(qcl::exponential_distribution(lambda), c), pi0};
}

}  // namespace

TEST_CASE("distribution quantiles invert their CDFs") {
    for (const auto& d : {qcl::normal_distribution(0, 1), qcl::normal_distribution(5, 2),
                          qcl::chi_squared_distribution(4), qcl::chi_squared_distribution(5),
                          qcl::exponential_distribution(1.0), qcl::exponential_distribution(0.3)}) {
        for (int i = 1; i <= 99; ++i) {
            double t = i / 100.0;
            double q = d.quantile(t);
            CHECK(d.cdf(q) >= t - 1e-10);
            CHECK(d.cdf(q) == Catch::Approx(t).margin(1e-9));
        }
    }
}

TEST_CASE("psi_exact reference values") {
    // N(0,1) vs N(1,1) at theta = 0.5: psi = Phi(0.5)
    CHECK(qcl::psi_exact(gaussian_shift(), QuantileLevel(0.5)) ==
          Catch::Approx(0.6914624612740131).epsilon(1e-12));

    // identical populations, pi0 = 0.5: psi = 0.5 for every theta
    UnivariateProblem same{qcl::normal_distribution(2, 3), qcl::normal_distribution(2, 3), 0.5};
    for (double t : {0.1, 0.3, 0.5, 0.7, 0.9})
        CHECK(qcl::psi_exact(same, QuantileLevel(t)) == Catch::Approx(0.5).margin(1e-12));

    // exponential shift matches the closed form
    CHECK(qcl::psi_exact(exponential_shift(), QuantileLevel(0.5)) ==
          Catch::Approx(0.6263061584040841).epsilon(1e-12));

    CHECK_THROWS_AS(qcl::psi_exact(gaussian_shift(), QuantileLevel(0.0)), std::invalid_argument);
    CHECK_THROWS_AS(qcl::psi_exact(gaussian_shift(), QuantileLevel(1.0)), std::invalid_argument);
}

TEST_CASE("exponential closed form") {
    CHECK(qcl::psi_exponential_shift(1.0, 0.5, 0.5, QuantileLevel(0.5)) ==
          Catch::Approx(0.6263061584040841).epsilon(1e-14));
    // the theta -> 0 limit
    CHECK(qcl::psi_exponential_shift(1.0, 0.5, 0.5, QuantileLevel(0.0)) ==
          Catch::Approx(0.6967346701436833).epsilon(1e-14));

    // strictly decreasing in theta for these parameters
    double prev = qcl::psi_exponential_shift(1.0, 0.5, 0.5, QuantileLevel(0.0));
    for (int i = 1; i <= 999; ++i) {
        double t = i / 1000.0;
        double cur = qcl::psi_exponential_shift(1.0, 0.5, 0.5, QuantileLevel(t));
        CHECK(cur < prev);
        prev = cur;
    }

    // agreement with the generic exact route at 20 grid points, to 1e-12
    auto grid = qcl::theta_grid(0.02, 20);
    auto problem = exponential_shift();
    for (double t : grid)
        CHECK(qcl::psi_exponential_shift(1.0, 0.5, 0.5, QuantileLevel(t)) ==
              Catch::Approx(qcl::psi_exact(problem, QuantileLevel(t))).margin(1e-12));

    CHECK_THROWS_AS(qcl::psi_exponential_shift(-1.0, 0.5, 0.5, QuantileLevel(0.5)),
                    std::invalid_argument);
    CHECK_THROWS_AS(qcl::psi_exponential_shift(1.0, 0.0, 0.5, QuantileLevel(0.5)),
                    std::invalid_argument);
}

TEST_CASE("four-region integrator agrees with psi_exact") {
    auto chisq = UnivariateProblem{qcl::chi_squared_distribution(5),
                                   qcl::shifted(qcl::chi_squared_distribution(5), 2.0), 0.5};
    for (const auto& problem : {gaussian_shift(), exponential_shift(), chisq}) {
        for (double t : {0.1, 0.25, 0.5, 0.75, 0.9}) {
            double exact = qcl::psi_exact(problem, QuantileLevel(t));
            double regions = qcl::oracles::psi_four_region(problem, t);
            CHECK(regions == Catch::Approx(exact).margin(1e-6));
        }
    }
    // unequal priors exercise both branch weights
    auto skewed = exponential_shift(1.0, 0.5, 0.3);
    for (double t : {0.2, 0.6})
        CHECK(qcl::oracles::psi_four_region(skewed, t) ==
              Catch::Approx(qcl::psi_exact(skewed, QuantileLevel(t))).margin(1e-6));
}

TEST_CASE("branch consistency where the quantile curves cross") {
    // N(0,1) vs N(1,2): q0(t) = q1(t) exactly at t = Phi(-1)
    UnivariateProblem problem{qcl::normal_distribution(0, 1), qcl::normal_distribution(1, 2), 0.5};
    double t = qcl::special::normal_cdf(-1.0);
    double q0 = problem.p0.quantile(t);
    double q1 = problem.p1.quantile(t);
    REQUIRE(std::fabs(q0 - q1) < 1e-9);
    // both branch formulas, transcribed directly
    double dd = t * q0 + (1 - t) * q1;
    double eq9 = 0.5 * problem.p0.cdf(dd) + 0.5 * (1 - problem.p1.cdf(dd));
    double dot = t * q1 + (1 - t) * q0;
    double eq10 = 0.5 * problem.p1.cdf(dot) + 0.5 * (1 - problem.p0.cdf(dot));
    CHECK(eq9 == Catch::Approx(eq10).margin(1e-9));
    CHECK(qcl::psi_exact(problem, QuantileLevel(t)) == Catch::Approx(eq9).margin(1e-9));
}

TEST_CASE("psi is location invariant and in [0,1]") {
    auto base = exponential_shift();
    UnivariateProblem moved{qcl::shifted(qcl::exponential_distribution(1.0), 13.25),
                            qcl::shifted(qcl::exponential_distribution(1.0), 13.75), 0.5};
    for (int i = 1; i < 20; ++i) {
        double t = i / 20.0;
        double a = qcl::psi_exact(base, QuantileLevel(t));
        double b = qcl::psi_exact(moved, QuantileLevel(t));
        CHECK(a == Catch::Approx(b).margin(1e-11));
        CHECK(a >= 0.0);
        CHECK(a <= 1.0);
    }
}

TEST_CASE("optimal theta scan") {
    auto grid = qcl::theta_grid(0.005, 199);

    auto g = qcl::optimal_theta_scan(gaussian_shift(), grid);
    CHECK(g.theta_star == Catch::Approx(0.5).margin(1e-12));

    UnivariateProblem chisq{qcl::chi_squared_distribution(5),
                            qcl::shifted(qcl::chi_squared_distribution(5), 2.0), 0.5};
    auto c = qcl::optimal_theta_scan(chisq, grid);
    CHECK(c.theta_star == Catch::Approx(0.236).margin(0.01));

    UnivariateProblem nvc{qcl::normal_distribution(5, 1), qcl::chi_squared_distribution(4), 0.5};
    auto m = qcl::optimal_theta_scan(nvc, grid);
    CHECK(m.theta_star == Catch::Approx(0.162).margin(0.01));

    CHECK_THROWS_AS(qcl::optimal_theta_scan(gaussian_shift(), std::span<const double>{}),
                    std::invalid_argument);
}

TEST_CASE("monte carlo psi matches the exact value and is thread-count invariant") {
    auto problem = exponential_shift();
    auto sampler = qcl::make_problem_sampler(problem);
    for (double t : {0.25, 0.5}) {
        std::vector<double> q{problem.p0.quantile(t), problem.p1.quantile(t)};
        auto est = qcl::psi_monte_carlo(sampler, q, 2, 1, QuantileLevel(t), 20000, 424242);
        double truth = qcl::psi_exact(problem, QuantileLevel(t));
        CHECK(std::fabs(est.estimate - truth) <= 4.0 * est.stderr_);

        auto est4 = qcl::psi_monte_carlo(sampler, q, 2, 1, QuantileLevel(t), 20000, 424242, 4);
        CHECK(est4.estimate == est.estimate);
    }

    // a generator that ignores the labels carries no information: psi ~ 0.5
    auto null_problem = UnivariateProblem{qcl::normal_distribution(0, 1),
                                          qcl::normal_distribution(0, 1), 0.5};
    auto null_sampler = qcl::make_problem_sampler(null_problem);
    std::vector<double> q{-0.3, 0.4};
    auto est = qcl::psi_monte_carlo(null_sampler, q, 2, 1, QuantileLevel(0.4), 20000, 7);
    CHECK(est.estimate == Catch::Approx(0.5).margin(4.0 * est.stderr_ + 1e-12));

    CHECK_THROWS_AS(qcl::psi_monte_carlo(null_sampler, q, 2, 1, QuantileLevel(0.4), 50, 7),
                    std::invalid_argument);
    CHECK_THROWS_AS(qcl::psi_monte_carlo(null_sampler, q, 3, 1, QuantileLevel(0.4), 1000, 7),
                    std::invalid_argument);
}
