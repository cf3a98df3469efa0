#include "radex/cli.hpp"

int main(int argc, char** argv) { return radex::cli::run(argc, argv); }
