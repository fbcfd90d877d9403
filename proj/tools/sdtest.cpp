#include <iostream>
#include <string>
#include <vector>

#include "sdtest/cli/run.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return sdtest::cli::run_cli(args, std::cout, std::cerr);
}
