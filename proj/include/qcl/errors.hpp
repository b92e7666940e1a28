#ifndef QCL_ERRORS_HPP
#define QCL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qcl {

// Bad experiment/CLI configuration (maps to exit code 2).
struct config_error : std::runtime_error {
    explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Unreadable or malformed input data (maps to exit code 3).
struct data_error : std::runtime_error {
    explicit data_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Sample has no spread; skewness is undefined on it.
struct degenerate_sample_error : std::runtime_error {
    explicit degenerate_sample_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace qcl

#endif  // QCL_ERRORS_HPP
