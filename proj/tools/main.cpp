#include "bihyp/verifier.hpp"

int main(int argc, char** argv) { return bihyp::cli_main(argc, argv); }
