#include "hallbounds/cli.hpp"

int main(int argc, char** argv) { return hallbounds::run_cli(argc, argv); }
