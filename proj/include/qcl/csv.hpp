#ifndef QCL_CSV_HPP
#define QCL_CSV_HPP

// Dataset CSV: header "y,x1,...,xp", label column first, LF line endings,
// floats at 17 significant digits (exact double round-trip).

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "qcl/dataset.hpp"
#include "qcl/errors.hpp"
#include "qcl/model_io.hpp"

namespace qcl {

inline void write_dataset_stream(std::ostream& out, const Dataset& data) {
    out << "y";
    for (int j = 1; j <= data.p(); ++j) out << ",x" << j;
    out << "\n";
    for (int i = 0; i < data.n(); ++i) {
        out << data.class_ids()[static_cast<std::size_t>(
            data.labels()[static_cast<std::size_t>(i)])];
        auto z = data.row(i);
        for (int j = 0; j < data.p(); ++j) out << "," << detail::fmt17(z[static_cast<std::size_t>(j)]);
        out << "\n";
    }
}

inline void write_dataset(const std::string& path, const Dataset& data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw data_error("cannot open for writing: " + path);
    write_dataset_stream(out, data);
    if (!out) throw data_error("failed writing: " + path);
}

inline Dataset read_dataset_stream(std::istream& in, const std::string& name) {
    std::string line;
    if (!std::getline(in, line)) throw data_error(name + ": empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto header = detail::split_csv(line);
    if (header.empty() || header[0] != "y")
        throw data_error(name + ":1: header must start with 'y'");
    int p = static_cast<int>(header.size()) - 1;
    if (p < 1) throw data_error(name + ":1: no feature columns");

    std::vector<double> features;
    std::vector<int> labels;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto toks = detail::split_csv(line);
        if (static_cast<int>(toks.size()) != p + 1)
            throw data_error(name + ":" + std::to_string(lineno) + ": expected " +
                             std::to_string(p + 1) + " fields, got " + std::to_string(toks.size()));
        char* end = nullptr;
        long y = std::strtol(toks[0].c_str(), &end, 10);
        if (end == toks[0].c_str() || *end != '\0')
            throw data_error(name + ":" + std::to_string(lineno) + ": bad label '" + toks[0] + "'");
        labels.push_back(static_cast<int>(y));
        for (int j = 1; j <= p; ++j) {
            double v = std::strtod(toks[static_cast<std::size_t>(j)].c_str(), &end);
            if (end == toks[static_cast<std::size_t>(j)].c_str() || *end != '\0' || !std::isfinite(v))
                throw data_error(name + ":" + std::to_string(lineno) + ": bad value '" +
                                 toks[static_cast<std::size_t>(j)] + "' in column x" + std::to_string(j));
            features.push_back(v);
        }
    }
    if (labels.empty()) throw data_error(name + ": no data rows");
    try {
        return Dataset::relabeled(std::move(features), labels, p);
    } catch (const std::invalid_argument& e) {
        throw data_error(name + ": " + e.what());
    }
}

inline Dataset read_dataset(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw data_error("cannot open: " + path);
    return read_dataset_stream(in, path);
}

}  // namespace qcl

#endif  // QCL_CSV_HPP
