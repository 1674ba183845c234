#pragma once

#include <string>
#include <vector>

namespace semimeasure {

// Machine-readable audit outcome shared by the library checks, the CLI
// and the acceptance suite.  Failures carry a serialized witness.
struct AuditReport {
    struct Check {
        std::string id;
        std::string subject;
        bool pass = true;
        std::string witness; // counterexample description, empty when passing
    };

    std::string suite;
    std::vector<Check> checks;

    bool passed() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
    void add(const std::string& id, const std::string& subject, bool pass, const std::string& witness = "") {
        checks.push_back(Check{id, subject, pass, pass ? "" : witness});
    }
    void merge(const AuditReport& o) {
        checks.insert(checks.end(), o.checks.begin(), o.checks.end());
    }
};

} // namespace semimeasure
