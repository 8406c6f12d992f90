#pragma once

#include <functional>
#include <ostream>
#include <string>
#include <vector>

namespace siegel {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    double seconds = 0;
    double budget = 0;  // seconds
    std::string detail;
};

struct Criterion {
    int id = 0;
    std::string name;
    double budget = 0;
    bool fast = false;  // part of the selftest tier
    std::function<bool(std::string& detail)> run;
};

// Criteria 1..9. Degree-3 spaces and eigenforms are computed once and shared
// between the criteria that need them.
std::vector<Criterion> acceptance_criteria();

// Runs one criterion, catching exceptions as failures. A run over budget fails.
CriterionResult run_criterion(const Criterion& c);
std::string format_result(const CriterionResult& r);

// Runs the selection in order, printing one line per criterion.
// Returns the number of failures.
int run_acceptance(const std::vector<Criterion>& selection, std::ostream& out);

}  // namespace siegel
