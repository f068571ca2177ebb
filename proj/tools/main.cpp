#include <iostream>

#include "pmsm/cli.hpp"

int main(int argc, char** argv)
{
    return pmsm::cli::run_cli(argc, argv, std::cout, std::cerr);
}
