#include "belhd/cli.h"

int main(int argc, char **argv) { return belhd::dispatch(argc, argv); }
