#pragma once

#include <cstdio>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "wreathlab/checks.hpp"

namespace wreathlab {

inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

inline std::string report_text(const std::vector<CheckResult>& checks) {
    std::ostringstream os;
    size_t width = 8;
    for (const auto& c : checks) width = std::max(width, c.name.size());
    for (const auto& c : checks) {
        os << (c.pass ? "[ok]   " : "[FAIL] ") << std::left << std::setw(static_cast<int>(width + 2))
           << c.name << " measured " << format_double(c.measured) << "  tolerance "
           << format_double(c.tolerance);
        if (!c.details.empty()) os << "  (" << c.details << ")";
        os << "\n";
    }
    size_t failed = 0;
    for (const auto& c : checks)
        if (!c.pass) ++failed;
    os << checks.size() << " checks, " << (checks.size() - failed) << " passed, " << failed
       << " failed\n";
    return os.str();
}

inline nlohmann::ordered_json report_json(const std::vector<CheckResult>& checks) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& c : checks) {
        nlohmann::ordered_json j;
        j["name"] = c.name;
        j["measured"] = format_double(c.measured);
        j["tolerance"] = format_double(c.tolerance);
        j["pass"] = c.pass;
        j["details"] = c.details;
        arr.push_back(j);
    }
    nlohmann::ordered_json root;
    root["checks"] = arr;
    size_t failed = 0;
    for (const auto& c : checks)
        if (!c.pass) ++failed;
    root["total"] = checks.size();
    root["failed"] = failed;
    return root;
}

inline bool all_pass(const std::vector<CheckResult>& checks) {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

}  // namespace wreathlab
