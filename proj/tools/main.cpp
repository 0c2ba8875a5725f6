#include "commands.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return hpt::cli::run(argc, argv, std::cout, std::cerr);
}
