#include "cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return funcineq::cli::run(argc, argv, std::cout, std::cerr);
}
