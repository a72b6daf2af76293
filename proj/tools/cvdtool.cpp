#include "cvd/cli.hpp"

int main(int argc, char** argv) { return cvd::cli::run(argc, argv); }
