#include "sirs/commands.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return sirs::run_cli(argc, argv, std::cout, std::cerr);
}
