#include <iostream>

#include "qthermo/cli.hpp"

int main(int argc, char **argv) { return qthermo::cli::run(argc, argv, std::cout, std::cerr); }
