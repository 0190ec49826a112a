#include <iostream>

#include "clonesim/cli.hpp"

int main(int argc, char** argv) {
    return clonesim::run_cli(argc, argv, std::cout, std::cerr);
}
