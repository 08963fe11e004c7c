#include "mps/cli.hpp"

int main(int argc, char** argv) { return mps::run_cli(argc, argv); }
