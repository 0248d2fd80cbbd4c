#include "frlab/cli.hpp"

int main(int argc, char** argv) { return frlab::cli::run(argc, argv); }
