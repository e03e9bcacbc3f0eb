#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace halfline {

/// Model validation failure. Collects every violated invariant so the
/// caller can report them all at once instead of fixing one at a time.
class validation_error : public std::runtime_error {
public:
    explicit validation_error(std::vector<std::string> violations)
        : std::runtime_error(join(violations)), violations_(std::move(violations)) {}

    const std::vector<std::string>& violations() const { return violations_; }

private:
    static std::string join(const std::vector<std::string>& v) {
        std::string out = "model validation failed:";
        for (const auto& s : v) {
            out += "\n  - ";
            out += s;
        }
        return out;
    }

    std::vector<std::string> violations_;
};

/// A numerical routine could not meet its accuracy contract. Carries the
/// best estimate obtained so far together with an error bound, so callers
/// that can tolerate degraded accuracy may still proceed.
class numeric_failure : public std::runtime_error {
public:
    numeric_failure(const std::string& what, double best_estimate, double error_bound)
        : std::runtime_error(what), best_estimate_(best_estimate), error_bound_(error_bound) {}

    explicit numeric_failure(const std::string& what)
        : numeric_failure(what, 0.0, 0.0) {}

    double best_estimate() const { return best_estimate_; }
    double error_bound() const { return error_bound_; }

private:
    double best_estimate_;
    double error_bound_;
};

/// Too little usable data for a statistical fit (e.g. nearly everything
/// censored).
class insufficient_data : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace halfline
