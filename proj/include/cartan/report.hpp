#pragma once

#include <string>
#include <vector>

namespace cartan {

// One named verdict. `residual` is the largest numeric defect seen while
// deciding it (0 for exact checks).
struct Check {
    std::string name;
    bool pass = true;
    double residual = 0.0;
    std::string detail;
};

struct Report {
    std::vector<Check> checks;

    Check& add(std::string name, bool pass, std::string detail = {}, double residual = 0.0);
    // Prefixes every check of `other` with `prefix + "/"`.
    void merge(const std::string& prefix, const Report& other);

    bool pass() const;
    double max_residual() const;
    const Check* find(const std::string& name) const;
    const Check* first_failure() const;
    std::string summary() const;
};

} // namespace cartan
