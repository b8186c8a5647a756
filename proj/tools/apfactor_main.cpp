#include <string>
#include <vector>

#include "apfactor/cli.hpp"

int main(int argc, char** argv) {
    return apfactor::cli::run(std::vector<std::string>(argv + 1, argv + argc));
}
