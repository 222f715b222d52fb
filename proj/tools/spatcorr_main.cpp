#include <iostream>

#include "spatcorr/cli.hpp"

int main(int argc, char** argv) {
    return spatcorr::cli::run_cli(argc, argv, std::cout, std::cerr);
}
