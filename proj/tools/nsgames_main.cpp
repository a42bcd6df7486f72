#include <nsgames/cli.hpp>

int main(int argc, char** argv) { return nsgames::run(argc, argv); }
