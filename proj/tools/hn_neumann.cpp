#include "hn/cli.hpp"

int main(int argc, char** argv) { return hn::cli_main(argc, argv); }
