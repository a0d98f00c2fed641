#include "dispatch.hpp"

#include <iostream>

int main(int argc, char** argv) { return pnf::cli::dispatch(argc, argv, std::cout, std::cerr); }
