#include "dispatch.hpp"

int main(int argc, char** argv) { return lcatile::cli::dispatch(argc, argv); }
