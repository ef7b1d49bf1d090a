#include "isoball/cli.hpp"

int main(int argc, char** argv) { return isoball::cli::run(argc, argv); }
