#include <iostream>

#include "gauntlet/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return gauntlet::cli_dispatch(args, std::cout, std::cerr);
}
