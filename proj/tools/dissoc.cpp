#include <iostream>

#include "dissoc/cli.hpp"

int main(int argc, char** argv) {
    return dissoc::run_cli(argc, argv, std::cout, std::cerr);
}
