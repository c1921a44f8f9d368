#include "uhlab/cli.hpp"

int main(int argc, char** argv) { return uhlab::run_cli(argc, argv); }
