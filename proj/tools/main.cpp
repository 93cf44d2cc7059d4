#include "commands.hpp"

int main(int argc, char** argv) { return paradoxlab::cli::run(argc, argv); }
