#include "vst/cli.hpp"

int main(int argc, char** argv) { return vst::run_cli(argc, argv); }
