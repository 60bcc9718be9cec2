#include "wattspell/cli/commands.hpp"

int main(int argc, char** argv) { return wspl::dispatch(argc, argv); }
