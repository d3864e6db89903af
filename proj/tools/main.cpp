#include <iostream>
#include <string>
#include <vector>

#include "vrcmf/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return vrcmf::run_cli(args, std::cout, std::cerr);
}
