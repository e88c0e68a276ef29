#include "cli.hpp"

int main(int argc, char** argv) { return sldp::cli::main(argc, argv); }
