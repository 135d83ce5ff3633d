#include "unimoments/cli.hpp"

int main(int argc, char** argv) { return unimoments::cli::run(argc, argv); }
