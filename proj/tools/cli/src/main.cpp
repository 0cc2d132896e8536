#include <iostream>
#include <string>
#include <vector>

#include "nlpg/cli/commands.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return nlpg::cli::run_cli(args, std::cerr);
}
