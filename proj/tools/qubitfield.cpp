#include "qubitfield/cli.hpp"

int main(int argc, char** argv) { return qubitfield::cli::run(argc, argv); }
