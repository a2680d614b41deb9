#include <iostream>

#include "kit/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return kit::run(args, std::cout, std::cerr);
}
