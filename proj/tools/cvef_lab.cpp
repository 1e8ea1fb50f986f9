#include "cvef/cli.hpp"

int main(int argc, char** argv) { return cvef::run_cli(argc, argv); }
