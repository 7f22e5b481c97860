#include <iostream>
#include <string>
#include <vector>

#include "remcorr/cli.hpp"

int main(int argc, char** argv) {
    const std::vector<std::string> args(argv + 1, argv + argc);
    return remcorr::cli::main_entry(args, std::cerr);
}
