#include "cartan/report.hpp"

#include <algorithm>
#include <sstream>

namespace cartan {

Check& Report::add(std::string name, bool pass, std::string detail, double residual) {
    checks.push_back({std::move(name), pass, residual, std::move(detail)});
    return checks.back();
}

void Report::merge(const std::string& prefix, const Report& other) {
    for (const auto& c : other.checks) {
        Check copy = c;
        copy.name = prefix + "/" + c.name;
        checks.push_back(std::move(copy));
    }
}

bool Report::pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

double Report::max_residual() const {
    double r = 0.0;
    for (const auto& c : checks) r = std::max(r, c.residual);
    return r;
}

const Check* Report::find(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

const Check* Report::first_failure() const {
    for (const auto& c : checks)
        if (!c.pass) return &c;
    return nullptr;
}

std::string Report::summary() const {
    std::ostringstream os;
    for (const auto& c : checks) {
        os << (c.pass ? "ok   " : "FAIL ") << c.name;
        if (c.residual > 0) os << " (residual " << c.residual << ")";
        if (!c.detail.empty()) os << ": " << c.detail;
        os << "\n";
    }
    return os.str();
}

} // namespace cartan
