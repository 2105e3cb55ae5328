#include "mep/cli.hpp"

int main(int argc, char** argv) { return mep::cli::run(argc, argv); }
