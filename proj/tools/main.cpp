#include "horizonlab/cli.hpp"

int main(int argc, char** argv) { return horizonlab::run_cli(argc, argv); }
