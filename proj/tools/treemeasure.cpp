#include <iostream>

#include "treemeasure/cli.hpp"

int main(int argc, char** argv)
{
	return treemeasure::run_cli(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
