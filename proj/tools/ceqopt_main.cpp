#include "ceqopt/io.hpp"

int main(int argc, char** argv) { return ceqopt::run_cli(argc, argv); }
