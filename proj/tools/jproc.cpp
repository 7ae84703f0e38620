#include <iostream>

#include "jproc/io.hpp"

int main(int argc, char **argv) { return jproc::cli_main(argc, argv, std::cin, std::cout, std::cerr); }
