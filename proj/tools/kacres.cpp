#include <iostream>

#include "kacres/cli.hpp"

int main(int argc, char** argv)
{
    return kacres::service::run_cli(argc, argv, std::cout, std::cerr);
}
