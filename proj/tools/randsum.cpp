#include <iostream>
#include <string>
#include <vector>

#include "randsum/cli.hpp"

int main(int argc, char** argv) {
    const std::vector<std::string> args(argv + 1, argv + argc);
    const auto report = randsum::cli::run(args, std::cout, std::cerr);
    return static_cast<int>(report.status);
}
