#include <iostream>

#include "qmemcap/cli.hpp"

int main(int argc, char** argv) { return qmemcap::run_cli(argc, argv, std::cout, std::cerr); }
