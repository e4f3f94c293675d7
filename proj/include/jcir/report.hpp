#pragma once

#include <sstream>
#include <string>

#include "json.hpp"

#include "jcir/experiments.hpp"

namespace jcir {

inline nlohmann::json report_to_json(const TestReport& r) {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["experiment"] = r.experiment;
    j["pass"] = r.pass;
    nlohmann::json gates = nlohmann::json::array();
    for (const auto& g : r.gates) {
        gates.push_back({{"name", g.name},
                         {"value", g.value},
                         {"relation", g.relation},
                         {"threshold", g.threshold},
                         {"pass", g.pass}});
    }
    j["gates"] = gates;
    j["metrics"] = r.metrics;
    return j;
}

inline std::string samples_csv(const TestReport& r) {
    std::ostringstream out;
    out.precision(17);
    out << "index,loglr,limit_loglr\n";
    const std::size_t n = std::max(r.samples.size(), r.limit_samples.size());
    for (std::size_t i = 0; i < n; ++i) {
        out << i << ',';
        if (i < r.samples.size()) out << r.samples[i];
        out << ',';
        if (i < r.limit_samples.size()) out << r.limit_samples[i];
        out << '\n';
    }
    return out.str();
}

inline std::string one_line_summary(const TestReport& r) {
    std::ostringstream out;
    out << r.experiment << ": " << (r.pass ? "PASS" : "FAIL");
    out << " [";
    bool first = true;
    for (const auto& g : r.gates) {
        if (!first) out << ", ";
        first = false;
        out << g.name << (g.pass ? " ok" : " FAILED");
    }
    out << "]";
    return out.str();
}

}  // namespace jcir
