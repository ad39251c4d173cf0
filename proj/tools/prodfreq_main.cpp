#include "prodfreq/cli.hpp"

int main(int argc, char** argv) { return prodfreq::cli::run_cli(argc, argv); }
