#include "stamp/commands.hpp"

int main(int argc, char** argv) { return stamp::cli::run_cli(argc, argv); }
