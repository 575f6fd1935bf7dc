#include "boundsim/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return boundsim::cli::run(argc, argv, std::cout, std::cerr);
}
