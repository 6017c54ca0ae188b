#include "cli.hpp"

int main(int argc, char** argv) { return stqmle::cli::Main(argc, argv); }
