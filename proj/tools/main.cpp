#include "cli.hpp"

int main(int argc, char** argv) { return bidlab::run_cli(argc, argv); }
