#include "commands.hpp"

int main(int argc, char** argv) { return encsched::cli::run_cli(argc, argv); }
