#include <iostream>
#include <string>
#include <vector>

#include "dmkit/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return dmkit::run_cli(args, std::cout, std::cerr);
}
