#include "cvsym/cli.hpp"

int main(int argc, char** argv) { return cvsym::cli::run(argc, argv); }
