#include "conjlab/cli.hpp"

int main(int argc, char** argv) { return conjlab::cli::run_main(argc, argv); }
