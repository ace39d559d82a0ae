#include "lognnet/cli/dispatch.hpp"

int main(int argc, char** argv) { return lognnet::cli::dispatch(argc, argv); }
