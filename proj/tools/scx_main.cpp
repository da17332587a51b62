#include <string>
#include <vector>

#include "scx/xcli.hpp"

int main(int argc, char** argv) {
    return scx::run_command(std::vector<std::string>(argv + 1, argv + argc));
}
