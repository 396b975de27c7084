#include "conjdist/cli.hpp"

int main(int argc, char** argv) { return conjdist::main_entry(argc, argv); }
