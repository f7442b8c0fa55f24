#include "commands.hpp"

int main(int argc, char** argv) { return robust_alloc::cli::run(argc, argv); }
