#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv)
{
    return statguard::cli::run(argc, argv, {std::cin, std::cout, std::cerr});
}
