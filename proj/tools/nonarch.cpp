#include "nonarch/cli.hpp"

int main(int argc, char** argv) { return nonarch::cli_main(argc, argv); }
