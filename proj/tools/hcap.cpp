#include <iostream>
#include <string>
#include <vector>

#include "hcap/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return hcap::cli::run(args, std::cout, std::cerr);
}
