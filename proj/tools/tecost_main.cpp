#include "tecost/cli.hpp"

int main(int argc, char** argv) { return tecost::cli::run(argc, argv); }
