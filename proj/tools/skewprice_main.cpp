#include <iostream>
#include <string>
#include <vector>

#include "skewprice/cli.hpp"

int main(int argc, char** argv) {
    const std::vector<std::string> args(argv, argv + argc);
    return skewprice::cli::run(args, std::cout, std::cerr);
}
