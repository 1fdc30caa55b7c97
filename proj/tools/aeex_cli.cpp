#include <iostream>

#include "aeex/cli.hpp"

int main(int argc, char** argv) { return aeex::parse_and_dispatch(argc, argv, std::cout, std::cerr); }
