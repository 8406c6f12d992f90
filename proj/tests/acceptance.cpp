#include <algorithm>
#include <cstring>
#include <iostream>
#include <string>
#include <vector>

#include "siegel/acceptance.hpp"

// Prints one PASS/FAIL line per acceptance criterion. With --fast only the
// selftest tier runs; numeric arguments select individual criteria.
int main(int argc, char** argv) {
    auto all = siegel::acceptance_criteria();
    std::vector<siegel::Criterion> chosen;
    bool fast = false;
    std::vector<int> ids;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--fast") == 0)
            fast = true;
        else
            ids.push_back(std::atoi(argv[i]));
    }
    for (auto& c : all) {
        if (fast && !c.fast) continue;
        if (!ids.empty() && std::find(ids.begin(), ids.end(), c.id) == ids.end()) continue;
        chosen.push_back(c);
    }
    int failures = siegel::run_acceptance(chosen, std::cout);
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
    return failures == 0 ? 0 : 1;
}
