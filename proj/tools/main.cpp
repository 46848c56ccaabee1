#include <iostream>
#include <string>
#include <vector>

#include "commands.hpp"

int main(int argc, char** argv)
{
	std::ios::sync_with_stdio(false);
	std::vector<std::string> args(argv, argv + argc);
	return segparse::tools::run_cli(args, std::cout, std::cerr);
}
