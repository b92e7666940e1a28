#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "qcl/classifier.hpp"
#include "qcl/csv.hpp"
#include "qcl/model_io.hpp"
#include "qcl/rng.hpp"
#include "qcl/simgen.hpp"

namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name) {
    return fs::temp_directory_path() / ("qcl_test_" + name);
}

}  // namespace

TEST_CASE("dataset csv round-trips every double exactly") {
    qcl::rng::Stream s(61);
    std::vector<double> feats;
    std::vector<int> labels;
    for (int i = 0; i < 40; ++i) {
        // exercise magnitudes across the double range
        feats.push_back(s.normal() * std::pow(10.0, s.uniform(-250.0, 250.0)));
        feats.push_back(-s.next_unit());
        feats.push_back(s.normal());
        labels.push_back(i % 3 == 0 ? 7 : (i % 3 == 1 ? -2 : 0));  // arbitrary label values
    }
    qcl::Dataset data = qcl::Dataset::relabeled(feats, labels, 3);

    auto path = temp_file("roundtrip.csv");
    qcl::write_dataset(path.string(), data);
    qcl::Dataset back = qcl::read_dataset(path.string());
    CHECK(back.features() == data.features());
    CHECK(back.labels() == data.labels());
    CHECK(back.class_ids() == std::vector<int>{-2, 0, 7});
    fs::remove(path);
}

TEST_CASE("dataset csv structure") {
    qcl::Dataset d({1.5, 2.0, 3.25, 4.0}, {0, 1}, 2, {10, 20});
    std::ostringstream out;
    qcl::write_dataset_stream(out, d);
    CHECK(out.str() == "y,x1,x2\n10,1.5,2\n20,3.25,4\n");
}

TEST_CASE("dataset csv error reporting carries line numbers") {
    auto path = temp_file("bad.csv");
    {
        std::ofstream f(path);
        f << "y,x1,x2\n0,1.0,2.0\n1,oops,3.0\n";
    }
    try {
        qcl::read_dataset(path.string());
        FAIL("expected data_error");
    } catch (const qcl::data_error& e) {
        CHECK(std::string(e.what()).find(":3:") != std::string::npos);
    }
    fs::remove(path);

    std::istringstream empty("");
    CHECK_THROWS_AS(qcl::read_dataset_stream(empty, "t"), qcl::data_error);
    std::istringstream noy("a,b\n1,2\n");
    CHECK_THROWS_AS(qcl::read_dataset_stream(noy, "t"), qcl::data_error);
    std::istringstream shortrow("y,x1,x2\n0,1.0\n");
    CHECK_THROWS_AS(qcl::read_dataset_stream(shortrow, "t"), qcl::data_error);
    std::istringstream inf_val("y,x1\n0,inf\n1,2\n");
    CHECK_THROWS_AS(qcl::read_dataset_stream(inf_val, "t"), qcl::data_error);
    std::istringstream one_class("y,x1\n0,1\n0,2\n");
    CHECK_THROWS_AS(qcl::read_dataset_stream(one_class, "t"), qcl::data_error);
    CHECK_THROWS_AS(qcl::read_dataset("/nonexistent/path.csv"), qcl::data_error);
}

TEST_CASE("model serialization round-trips bit-exactly") {
    qcl::ScenarioSpec spec{qcl::Scenario::mixed_blocks, 60, 10, 0.5, false, 71};
    auto [train, test] = qcl::generate(spec);
    qcl::FitConfig config;
    config.skew_mode = qcl::SkewnessMode::galton();
    config.standardization = qcl::Standardization::pooled_within_var();
    qcl::QuantileModel model = qcl::fit(train, config);

    std::string text = qcl::model_to_text(model);
    qcl::QuantileModel back = qcl::model_from_text(text);
    CHECK(back.theta_star == model.theta_star);
    CHECK(back.g == model.g);
    CHECK(back.p == model.p);
    CHECK(back.tau == model.tau);
    CHECK(back.grid_size == model.grid_size);
    CHECK(back.quantiles == model.quantiles);
    CHECK(back.flips == model.flips);
    CHECK(back.scales == model.scales);
    CHECK(back.class_ids == model.class_ids);
    CHECK(back.skew_mode.kind == model.skew_mode.kind);
    CHECK(back.skew_mode.u == model.skew_mode.u);
    CHECK(back.standardization.kind == model.standardization.kind);

    // the reloaded model classifies identically
    auto pa = qcl::predict_all(model, test);
    auto pb = qcl::predict_all(back, test);
    CHECK(pa == pb);

    // file round-trip preserves the exact bytes
    auto path = temp_file("model.txt");
    qcl::save_model(model, path.string());
    qcl::QuantileModel loaded = qcl::load_model(path.string());
    CHECK(qcl::model_to_text(loaded) == text);
    fs::remove(path);
}

TEST_CASE("group_map models carry the group assignment") {
    qcl::Dataset d({1, 5, 2, 7, 3, 6, 4, 10, 0, 4, 5, 9}, {0, 0, 1, 1, 0, 1}, 2);
    qcl::FitConfig config;
    config.standardization = qcl::Standardization::group_map({0, 1});
    qcl::QuantileModel model = qcl::fit(d, config);
    qcl::QuantileModel back = qcl::model_from_text(qcl::model_to_text(model));
    CHECK(back.standardization.groups == std::vector<int>{0, 1});
}

TEST_CASE("model text rejects corruption") {
    CHECK_THROWS_AS(qcl::model_from_text("qcl_model_version = 2\n"), qcl::data_error);
    CHECK_THROWS_AS(qcl::model_from_text("not a model"), qcl::data_error);
    qcl::Dataset d({0.0, 0.0, 1.0, 1.0}, {0, 0, 1, 1}, 1);
    std::string good = qcl::model_to_text(qcl::fit(d, qcl::FitConfig{}));
    std::string truncated = good.substr(0, good.size() - 5);
    CHECK_THROWS_AS(qcl::model_from_text(truncated), qcl::data_error);
    CHECK_THROWS_AS(qcl::load_model("/nonexistent/model.txt"), qcl::data_error);
}
