#ifndef QCL_MODEL_IO_HPP
#define QCL_MODEL_IO_HPP

// Flat, versioned text format for fitted models. Floats are written with 17
// significant digits, which round-trips every double exactly.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "qcl/classifier.hpp"
#include "qcl/errors.hpp"

namespace qcl {

namespace detail {

inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline double parse_double(const std::string& tok, const std::string& what) {
    char* end = nullptr;
    double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0')
        throw data_error("model file: bad " + what + " value '" + tok + "'");
    return v;
}

inline std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace detail

inline std::string model_to_text(const QuantileModel& model) {
    std::ostringstream out;
    out << "qcl_model_version = 1\n";
    out << "g = " << model.g << "\n";
    out << "p = " << model.p << "\n";
    out << "theta_star = " << detail::fmt17(model.theta_star) << "\n";
    out << "tau = " << detail::fmt17(model.tau) << "\n";
    out << "grid_size = " << model.grid_size << "\n";
    out << "skew_mode = " << model.skew_mode.to_string() << "\n";
    out << "standardization = " << model.standardization.to_string() << "\n";

    out << "class_ids = ";
    for (int k = 0; k < model.g; ++k)
        out << (k ? "," : "") << model.class_ids[static_cast<std::size_t>(k)];
    out << "\n";

    out << "flips = ";
    for (int j = 0; j < model.p; ++j)
        out << (j ? "," : "") << model.flips[static_cast<std::size_t>(j)];
    out << "\n";

    out << "scales = ";
    for (int j = 0; j < model.p; ++j)
        out << (j ? "," : "") << detail::fmt17(model.scales[static_cast<std::size_t>(j)]);
    out << "\n";

    if (model.standardization.kind == Standardization::Kind::group_map) {
        out << "groups = ";
        for (int j = 0; j < model.p; ++j)
            out << (j ? "," : "") << model.standardization.groups[static_cast<std::size_t>(j)];
        out << "\n";
    }

    out << "quantiles:\n";
    for (int k = 0; k < model.g; ++k) {
        for (int j = 0; j < model.p; ++j)
            out << (j ? "," : "")
                << detail::fmt17(model.quantiles[static_cast<std::size_t>(k) * model.p +
                                                 static_cast<std::size_t>(j)]);
        out << "\n";
    }
    return out.str();
}

inline QuantileModel model_from_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    QuantileModel model;
    bool versioned = false;
    std::string groups_line;

    auto expect_kv = [](const std::string& l, const std::string& key) -> std::string {
        auto pos = l.find('=');
        if (pos == std::string::npos || l.substr(0, pos) != key + " ")
            throw data_error("model file: expected '" + key + " = ...', got '" + l + "'");
        auto v = l.substr(pos + 1);
        if (!v.empty() && v.front() == ' ') v.erase(0, 1);
        return v;
    };

    if (!std::getline(in, line) || expect_kv(line, "qcl_model_version") != "1")
        throw data_error("model file: unsupported version");
    versioned = true;
    (void)versioned;

    std::getline(in, line);
    model.g = std::stoi(expect_kv(line, "g"));
    std::getline(in, line);
    model.p = std::stoi(expect_kv(line, "p"));
    if (model.g < 2 || model.p < 1) throw data_error("model file: bad dimensions");
    std::getline(in, line);
    model.theta_star = detail::parse_double(expect_kv(line, "theta_star"), "theta_star");
    std::getline(in, line);
    model.tau = detail::parse_double(expect_kv(line, "tau"), "tau");
    std::getline(in, line);
    model.grid_size = std::stoi(expect_kv(line, "grid_size"));
    std::getline(in, line);
    model.skew_mode = SkewnessMode::parse(expect_kv(line, "skew_mode"));
    std::getline(in, line);
    model.standardization = Standardization::parse_kind(expect_kv(line, "standardization"));

    std::getline(in, line);
    for (auto& tok : detail::split_csv(expect_kv(line, "class_ids")))
        model.class_ids.push_back(std::stoi(tok));
    if (static_cast<int>(model.class_ids.size()) != model.g)
        throw data_error("model file: class_ids length mismatch");

    std::getline(in, line);
    for (auto& tok : detail::split_csv(expect_kv(line, "flips"))) {
        int f = std::stoi(tok);
        if (f != 1 && f != -1) throw data_error("model file: flips must be +-1");
        model.flips.push_back(f);
    }
    if (static_cast<int>(model.flips.size()) != model.p)
        throw data_error("model file: flips length mismatch");

    std::getline(in, line);
    for (auto& tok : detail::split_csv(expect_kv(line, "scales")))
        model.scales.push_back(detail::parse_double(tok, "scale"));
    if (static_cast<int>(model.scales.size()) != model.p)
        throw data_error("model file: scales length mismatch");

    std::getline(in, line);
    if (line.rfind("groups =", 0) == 0) {
        for (auto& tok : detail::split_csv(expect_kv(line, "groups")))
            model.standardization.groups.push_back(std::stoi(tok));
        if (static_cast<int>(model.standardization.groups.size()) != model.p)
            throw data_error("model file: groups length mismatch");
        std::getline(in, line);
    }
    if (line != "quantiles:") throw data_error("model file: expected 'quantiles:' block");

    for (int k = 0; k < model.g; ++k) {
        if (!std::getline(in, line)) throw data_error("model file: truncated quantile matrix");
        auto toks = detail::split_csv(line);
        if (static_cast<int>(toks.size()) != model.p)
            throw data_error("model file: quantile row length mismatch");
        for (auto& tok : toks) model.quantiles.push_back(detail::parse_double(tok, "quantile"));
    }
    return model;
}

inline void save_model(const QuantileModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw data_error("cannot open model file for writing: " + path);
    out << model_to_text(model);
    if (!out) throw data_error("failed writing model file: " + path);
}

inline QuantileModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw data_error("cannot open model file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return model_from_text(buf.str());
}

}  // namespace qcl

#endif  // QCL_MODEL_IO_HPP
