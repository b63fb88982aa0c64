#include "pidlint/cli.hpp"

int main(int argc, char** argv) { return pidlint::cli::run(argc, argv); }
