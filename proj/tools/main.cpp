#include "saddlebounds/cli.hpp"

int main(int argc, char** argv) { return saddlebounds::cli::run(argc, argv); }
