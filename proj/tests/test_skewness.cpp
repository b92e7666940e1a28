#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "qcl/rng.hpp"
#include "qcl/simgen.hpp"
#include "qcl/skewness.hpp"

using qcl::SortedSample;

TEST_CASE("standardized third moment") {
    CHECK(qcl::standardized_third_moment(SortedSample::from_sorted({-1.0, 0.0, 1.0})) == 0.0);
    // {0,0,0,1}: m3/s^3 = 2/sqrt(3)
    CHECK(qcl::standardized_third_moment(SortedSample::from_sorted({0.0, 0.0, 0.0, 1.0})) ==
          Catch::Approx(1.1547005383792515).epsilon(1e-12));

    qcl::rng::Stream s(5);
    for (int rep = 0; rep < 50; ++rep) {
        std::vector<double> v(20), neg(20);
        for (int i = 0; i < 20; ++i) {
            v[static_cast<std::size_t>(i)] = s.uniform(-4.0, 9.0);
            neg[static_cast<std::size_t>(i)] = -v[static_cast<std::size_t>(i)];
        }
        double a = qcl::standardized_third_moment(SortedSample::from_unsorted(v));
        double b = qcl::standardized_third_moment(SortedSample::from_unsorted(neg));
        CHECK(b == Catch::Approx(-a).margin(1e-12));
        // location/scale invariance
        std::vector<double> aff(20);
        for (int i = 0; i < 20; ++i) aff[static_cast<std::size_t>(i)] = 2.5 * v[static_cast<std::size_t>(i)] + 7.0;
        CHECK(qcl::standardized_third_moment(SortedSample::from_unsorted(aff)) ==
              Catch::Approx(a).margin(1e-9));
    }

    CHECK_THROWS_AS(qcl::standardized_third_moment(SortedSample::from_sorted({3.0, 3.0, 3.0})),
                    qcl::degenerate_sample_error);
    CHECK_THROWS_AS(qcl::standardized_third_moment(SortedSample::from_sorted({3.0})),
                    std::invalid_argument);
}

TEST_CASE("quantile skewness") {
    CHECK(qcl::quantile_skewness(SortedSample::from_sorted({-2, -1, 0, 1, 2}), 0.75) == 0.0);

    // Exp(1) population Galton value (ln4 + ln(4/3) - 2 ln2)/(ln4 - ln(4/3))
    qcl::rng::Stream s(17);
    std::vector<double> v(100000);
    for (double& x : v) x = s.exponential(1.0);
    double g = qcl::quantile_skewness(SortedSample::from_unsorted(v), 0.75);
    CHECK(g == Catch::Approx(0.261859507142915).margin(0.02));

    // antisymmetry & boundedness & invariance; odd n keeps all three
    // order-statistic indices off the integer boundaries where the
    // left-continuous quantile of a negated sample picks the neighbor
    for (int rep = 0; rep < 50; ++rep) {
        std::vector<double> w(41), neg(41), aff(41);
        for (int i = 0; i < 41; ++i) {
            w[static_cast<std::size_t>(i)] = s.uniform(0.0, 1.0) * s.uniform(0.0, 5.0);
            neg[static_cast<std::size_t>(i)] = -w[static_cast<std::size_t>(i)];
            aff[static_cast<std::size_t>(i)] = 3.0 * w[static_cast<std::size_t>(i)] - 2.0;
        }
        double u = s.uniform(0.55, 1.0);
        double a = qcl::quantile_skewness(SortedSample::from_unsorted(w), u);
        CHECK(a >= -1.0);
        CHECK(a <= 1.0);
        CHECK(qcl::quantile_skewness(SortedSample::from_unsorted(neg), u) ==
              Catch::Approx(-a).margin(1e-12));
        CHECK(qcl::quantile_skewness(SortedSample::from_unsorted(aff), u) ==
              Catch::Approx(a).margin(1e-12));
    }

    bool degenerate = false;
    CHECK(qcl::quantile_skewness(SortedSample::from_sorted({1.0, 1.0, 1.0, 1.0}), 0.75,
                                 &degenerate) == 0.0);
    CHECK(degenerate);
    CHECK_THROWS_AS(qcl::quantile_skewness(SortedSample::from_sorted({1.0, 2.0}), 0.4),
                    std::invalid_argument);
}

TEST_CASE("skewness mode parsing") {
    CHECK(qcl::SkewnessMode::parse("galton").kind == qcl::SkewnessMode::Kind::quantile);
    CHECK(qcl::SkewnessMode::parse("galton").u == 0.75);
    CHECK(qcl::SkewnessMode::parse("quantile:0.9").u == Catch::Approx(0.9));
    CHECK(qcl::SkewnessMode::parse("moment").kind == qcl::SkewnessMode::Kind::moment);
    CHECK_THROWS_AS(qcl::SkewnessMode::parse("bogus"), qcl::config_error);
    CHECK_THROWS_AS(qcl::SkewnessMode::quantile(0.3), std::invalid_argument);
}

namespace {

qcl::Dataset two_class(const std::vector<double>& c0, const std::vector<double>& c1, int p) {
    std::vector<double> feats = c0;
    feats.insert(feats.end(), c1.begin(), c1.end());
    std::vector<int> labels(c0.size() / static_cast<std::size_t>(p), 0);
    labels.insert(labels.end(), c1.size() / static_cast<std::size_t>(p), 1);
    return qcl::Dataset(std::move(feats), std::move(labels), p);
}

}  // namespace

TEST_CASE("class averaged skewness is the equal-weight mean over classes") {
    // class 0 column skew = +x, class 1 column skew = -y; averaged sign decides
    std::vector<double> c0{0, 0, 0, 1};   // skew +1.1547
    std::vector<double> c1{0, 1, 1, 1, 1, 1};  // negated pattern, skew about -2
    auto data = two_class(c0, c1, 1);
    auto avg = qcl::class_averaged_skewness(data, qcl::SkewnessMode::moment());
    double s0 = qcl::standardized_third_moment(SortedSample::from_unsorted(c0));
    double s1 = qcl::standardized_third_moment(SortedSample::from_unsorted(c1));
    CHECK(avg[0] == Catch::Approx(0.5 * (s0 + s1)).epsilon(1e-14));

    // symmetric within both classes -> zero vector
    auto sym = two_class({-1, 0, 1}, {4, 5, 6}, 1);
    auto z = qcl::class_averaged_skewness(sym, qcl::SkewnessMode::moment());
    CHECK(z[0] == 0.0);

    auto tiny = two_class({1.0}, {2.0, 3.0}, 1);
    CHECK_THROWS_AS(qcl::class_averaged_skewness(tiny, qcl::SkewnessMode::moment()),
                    std::invalid_argument);
    CHECK_THROWS_AS(qcl::class_averaged_skewness(sym, qcl::SkewnessMode::none()),
                    std::invalid_argument);
}

TEST_CASE("sign flips") {
    // column 0 positively skewed in both classes, column 1 symmetric
    auto data = two_class({0, 0, 0, 1, 0, 0, 1, 1}, {5, 5, 5, 6, 5, 5, 6, 6}, 2);

    auto none = qcl::compute_sign_flips(data, qcl::SkewnessMode::none());
    CHECK(none == std::vector<int>{1, 1});

    auto flips = qcl::compute_sign_flips(data, qcl::SkewnessMode::moment());
    CHECK(flips == std::vector<int>{1, 1});

    // negating a column negates its flip
    auto negcol = qcl::apply_sign_flips(data, {-1, 1});
    auto flips2 = qcl::compute_sign_flips(negcol, qcl::SkewnessMode::moment());
    CHECK(flips2 == std::vector<int>{-1, 1});

    // involution and identity
    auto back = qcl::apply_sign_flips(negcol, {-1, 1});
    for (int i = 0; i < data.n(); ++i)
        for (int j = 0; j < data.p(); ++j) CHECK(back.at(i, j) == data.at(i, j));
    auto same = qcl::apply_sign_flips(data, {1, 1});
    for (int i = 0; i < data.n(); ++i)
        for (int j = 0; j < data.p(); ++j) CHECK(same.at(i, j) == data.at(i, j));

    CHECK_THROWS_AS(qcl::apply_sign_flips(data, {1}), std::invalid_argument);
    CHECK_THROWS_AS(qcl::apply_sign_flips(data, {1, 2}), std::invalid_argument);
}

TEST_CASE("full negation flips every matrix entry") {
    qcl::Dataset m({1, 2, 3, 4}, {0, 1}, 2);
    auto out = qcl::apply_sign_flips(m, {-1, -1});
    CHECK(out.at(0, 0) == -1.0);
    CHECK(out.at(0, 1) == -2.0);
    CHECK(out.at(1, 0) == -3.0);
    CHECK(out.at(1, 1) == -4.0);
}

TEST_CASE("scenario data: lognormal columns all positively skewed, flips stabilize signs") {
    qcl::ScenarioSpec spec{qcl::Scenario::lognormal_shift, 1000, 5, 1.0, false, 99};
    auto [train, test] = qcl::generate(spec);
    auto avg = qcl::class_averaged_skewness(train, qcl::SkewnessMode::moment());
    for (double v : avg) CHECK(v > 1.0);

    // after flipping, recomputed class-averaged skewness is nonnegative
    qcl::ScenarioSpec spec3{qcl::Scenario::mixed_blocks, 400, 10, 1.0, false, 21};
    auto [tr3, te3] = qcl::generate(spec3);
    auto flips = qcl::compute_sign_flips(tr3, qcl::SkewnessMode::galton());
    auto flipped = qcl::apply_sign_flips(tr3, flips);
    auto post = qcl::class_averaged_skewness(flipped, qcl::SkewnessMode::galton());
    for (double v : post) CHECK(v >= 0.0);
    // and recomputing flips on flipped data gives all +1 where skewness is nonzero
    auto flips2 = qcl::compute_sign_flips(flipped, qcl::SkewnessMode::galton());
    for (std::size_t j = 0; j < post.size(); ++j)
        if (post[j] != 0.0) CHECK(flips2[j] == 1);
}
