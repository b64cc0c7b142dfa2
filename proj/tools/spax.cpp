#include "spax/cli.hpp"

int main(int argc, char** argv) { return spax::run_cli(argc, argv); }
