#include "socsim/cli.hpp"

int main(int argc, char** argv) {
    return socsim::run_cli(argc, argv);
}
