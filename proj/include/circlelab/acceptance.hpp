// Acceptance battery: one pass/fail line per criterion.
#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace circlelab::acceptance {

struct Outcome {
    bool pass = false;
    std::string detail;        // measured values against thresholds
};

struct Criterion {
    int id = 0;
    std::string name;
    double budget_seconds = 0;
    std::function<Outcome()> run;
};

struct Report {
    int id = 0;
    std::string name;
    bool pass = false;
    bool within_budget = true;
    double seconds = 0;
    double budget_seconds = 0;
    std::string detail;
};

std::vector<Criterion> acceptance_criteria();
// Cheap subset for a fresh checkout.
std::vector<Criterion> smoke_criteria();
// "acceptance" or "smoke"; throws std::invalid_argument otherwise.
std::vector<Criterion> suite(const std::string& name);

// Runs the criteria in order, printing each line to out as it finishes.
// An empty selection runs everything.
std::vector<Report> run(const std::vector<Criterion>& criteria, std::ostream& out,
                        const std::vector<int>& only = {});
std::string format(const Report& r);
bool all_passed(const std::vector<Report>& reports);

}  // namespace circlelab::acceptance
