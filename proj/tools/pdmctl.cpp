#include "pdm/cli.hpp"

int main(int argc, char** argv) { return pdm::cli::run(argc, argv); }
