#include <string>
#include <vector>

#include "pm25kit/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return pm25::run_command(args);
}
