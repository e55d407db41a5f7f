#include "mtp/cli.hpp"

int main(int argc, char** argv) { return mtp::cli_main(argc, argv); }
