#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace seglab {

// One measured quantity inside a criterion. `tol` is an absolute bound
// on |measured - target| unless the check name says otherwise.
struct AcceptanceCheck {
    std::string name;
    double measured = 0.0;
    double target = 0.0;
    double tol = 0.0;
    bool pass = false;
};

struct CriterionResult {
    int id = 0;
    std::string title;
    std::vector<AcceptanceCheck> checks;
    std::string error;  // nonempty if the criterion threw

    bool pass() const;
};

// Runs the full acceptance suite at pinned desk-scale resolutions,
// logging one line per criterion to `progress`. Deterministic: fixed
// seeds, single-threaded.
std::vector<CriterionResult> run_acceptance(std::ostream& progress);

std::string acceptance_report_json(const std::vector<CriterionResult>& results);

}  // namespace seglab
