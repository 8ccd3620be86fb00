#include <iostream>

#include "mtsf/cli.hpp"

int main(int argc, char** argv) { return mtsf::cli::run(argc, argv, std::cout, std::cerr); }
