// Runs the acceptance battery and prints one line per criterion.
//
//   circlelab-acceptance              all criteria
//   circlelab-acceptance 3 7          selected criteria
//   circlelab-acceptance --smoke      the quick subset

#include "circlelab/acceptance.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv)
{
    CLI::App app{"acceptance battery"};
    std::vector<int> only;
    bool smoke = false;
    app.add_option("ids", only, "criterion numbers to run");
    app.add_flag("--smoke", smoke, "run the smoke subset");
    CLI11_PARSE(app, argc, argv);

    namespace acc = circlelab::acceptance;
    const auto reports = acc::run(smoke ? acc::smoke_criteria() : acc::acceptance_criteria(), std::cout, only);
    std::size_t passed = 0;
    for (const auto& r : reports)
        passed += r.pass;
    std::cout << passed << "/" << reports.size() << " criteria passed\n";
    return acc::all_passed(reports) && !reports.empty() ? 0 : 1;
}
