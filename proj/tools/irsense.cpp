#include "irsense/cli.hpp"

int main(int argc, char** argv) { return irsense::cli::run(argc, argv); }
