#include "commands.hpp"

#include <iostream>

int main(int argc, char **argv)
{
    return vsc::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
