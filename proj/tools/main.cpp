#include "hebbsync/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return hebbsync::cli::run(argc, argv, std::cout, std::cerr);
}
