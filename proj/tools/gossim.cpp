#include "gossim/cli.hpp"

int main(int argc, char** argv) { return gossim::cli::main(argc, argv); }
