#include "ominv/cli/cli.hpp"

int main(int argc, char **argv) { return ominv::run_cli(argc, argv); }
