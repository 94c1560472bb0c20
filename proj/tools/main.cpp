#include "cli.hpp"

int main(int argc, char** argv) { return rwpoly::cli::main(argc, argv); }
