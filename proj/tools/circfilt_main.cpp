#include "circfilt/cli.hpp"

int main(int argc, char** argv) { return circfilt::run_cli(argc, argv); }
