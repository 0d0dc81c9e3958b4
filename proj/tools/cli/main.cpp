#include "cli.hpp"

int main(int argc, char** argv) { return apc::cli::run_main(argc, argv); }
