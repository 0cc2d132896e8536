// Acceptance runner: one PASS/FAIL line per criterion.
//
//   nlpg_acceptance                 run all criteria
//   nlpg_acceptance --criterion 4   run one
//   nlpg_acceptance --seed 7        change the seed of the randomised ones

#include <cstdlib>
#include <iostream>
#include <string>

#include "nlpg/verify/acceptance.hpp"

int main(int argc, char** argv) {
    int only = 0;
    std::uint64_t seed = 1;
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--criterion" && i + 1 < argc) only = std::atoi(argv[++i]);
        else if (a == "--seed" && i + 1 < argc) seed = std::strtoull(argv[++i], nullptr, 10);
        else {
            std::cerr << "usage: nlpg_acceptance [--criterion N] [--seed S]\n";
            return 1;
        }
    }
    if (only < 0 || only > nlpg::verify::kCriterionCount) {
        std::cerr << "criterion must be between 1 and " << nlpg::verify::kCriterionCount << "\n";
        return 1;
    }
    bool all = true;
    for (int id = 1; id <= nlpg::verify::kCriterionCount; ++id) {
        if (only != 0 && id != only) continue;
        const auto r = nlpg::verify::run_criterion(id, seed);
        std::cout << nlpg::verify::format_line(r) << std::endl;
        all = all && r.pass;
    }
    return all ? 0 : 1;
}
