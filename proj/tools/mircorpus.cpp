#include <iostream>

#include "mircorpus/cli/commands.hpp"

int main(int argc, char** argv)
{
    return mircorpus::cli::run_cli(argc, argv, std::cout, std::cerr);
}
