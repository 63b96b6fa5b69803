// Acceptance suite runner: one pass/fail line per criterion.
#include <CLI11.hpp>

#include <iostream>
#include <vector>

#include "fermirdm/acceptance.hpp"

int main(int argc, char** argv) {
    CLI::App app{"fermirdm acceptance suite"};
    std::vector<int> ids;
    fermirdm::acceptance::Options options;
    app.add_option("-c,--criterion", ids, "criterion numbers to run (default: all)")
        ->check(CLI::Range(1, fermirdm::acceptance::kCriterionCount));
    app.add_flag("--quick", options.quick, "skip the t = 0.01 solves");
    app.add_option("--tolerance-scale", options.tolerance_scale, "multiply every tolerance");
    CLI11_PARSE(app, argc, argv);

    if (ids.empty()) {
        for (int i = 1; i <= fermirdm::acceptance::kCriterionCount; ++i) ids.push_back(i);
    }
    bool ok = true;
    for (int id : ids) {
        const auto r = fermirdm::acceptance::run_criterion(id, options);
        std::cout << fermirdm::acceptance::format_result(r) << std::flush;
        ok = ok && r.status != fermirdm::acceptance::Status::failed;
    }
    return ok ? 0 : 1;
}
