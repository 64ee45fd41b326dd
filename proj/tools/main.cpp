#include <iostream>

#include "memschrod/cli.hpp"

int main(int argc, char** argv) {
    return memschrod::cli_main(argc, argv, std::cout, std::cerr);
}
