#include "cli.hpp"

int main(int argc, char** argv) { return avpool::cli::run(argc, argv); }
