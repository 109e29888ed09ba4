#include <iostream>
#include <string>
#include <vector>

#include "codeclag/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return codeclag::cli::run(args, std::cout, std::cerr);
}
