#include "mmm/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return mmm::cli::run(argc, argv, std::cout, std::cerr);
}
