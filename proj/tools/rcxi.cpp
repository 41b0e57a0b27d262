#include "rcxi/cli.hpp"

int main(int argc, char** argv) { return rcxi::cli::run(argc, argv); }
