#include "lcsvm/cli.hpp"

int main(int argc, char** argv) { return lcsvm::run_cli(argc, argv); }
