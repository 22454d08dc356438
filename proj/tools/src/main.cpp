#include "rcurc_cli/cli.hpp"

int main(int argc, char** argv) { return rcurc_cli::run_cli(argc, argv); }
