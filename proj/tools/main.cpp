#include "cli.hpp"

int main(int argc, char** argv) { return nakasec::cli::run(argc, argv); }
