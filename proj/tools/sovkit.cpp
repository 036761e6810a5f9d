#include "sov/cli.hpp"

int main(int argc, char** argv) { return sov::cli::main_entry(argc, argv); }
