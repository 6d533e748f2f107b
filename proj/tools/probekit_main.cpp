#include "probekit/cli.hpp"

int main(int argc, char** argv) { return probekit::cli::run(argc, argv); }
