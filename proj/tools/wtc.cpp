#include "wtc/cli.hpp"

int main(int argc, char** argv) { return wtc::cli::run(argc, argv); }
