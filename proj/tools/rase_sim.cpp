#include "rasesim/cli.hpp"

int main(int argc, char** argv) { return rasesim::run_cli(argc, argv); }
