#include <iostream>

#include "qnet/cli.hpp"

int main(int argc, char** argv) {
    return qnet::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
