#include "lexshift/cli.hpp"

int main(int argc, char** argv) { return lexshift::run_cli(argc, argv); }
