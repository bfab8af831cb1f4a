#include <iostream>
#include <string>
#include <vector>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "dynlay/cli.hpp"

int main(int argc, char** argv)
{
    spdlog::set_default_logger(spdlog::stderr_color_mt("dynlay"));
    std::vector<std::string> args(argv + 1, argv + argc);
    return dynlay::cli::cli_main(args, std::cin, std::cout, std::cerr);
}
