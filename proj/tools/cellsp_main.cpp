#include "cellsp/cli.hpp"

int main(int argc, char** argv) { return cellsp::runCli(argc, argv); }
