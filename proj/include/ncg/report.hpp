#pragma once

#include <string>
#include <utility>
#include <vector>

namespace ncg {

/// One named numerical check: passes when residual <= tolerance.
struct CheckResult {
    std::string name;
    double residual = 0.0;
    double tolerance = 0.0;
    bool passed = false;
    /// Informational checks are reported but do not affect overall success.
    bool required = true;

    static CheckResult make(std::string name, double residual, double tolerance, bool required = true) {
        return {std::move(name), residual, tolerance, residual <= tolerance, required};
    }
};

struct ValidationReport {
    std::vector<CheckResult> checks;

    bool passed() const {
        for (const auto& c : checks) {
            if (c.required && !c.passed) return false;
        }
        return true;
    }

    const CheckResult* find(const std::string& name) const {
        for (const auto& c : checks) {
            if (c.name == name) return &c;
        }
        return nullptr;
    }
};

} // namespace ncg
