#include "b3opt/cli/cli.hpp"

int main(int argc, char** argv) {
    return b3opt::cli::run_cli(argc, argv);
}
