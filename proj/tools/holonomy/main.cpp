#include "commands.hpp"

int main(int argc, char** argv) { return holonomy::cli::run_cli(argc, argv); }
