#include "pir2/cli.hpp"

int main(int argc, char** argv) { return pir2::cli::run(argc, argv); }
