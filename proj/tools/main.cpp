#include "varschouten/harness.hpp"

int main(int argc, char** argv) { return varschouten::cli_main(argc, argv); }
