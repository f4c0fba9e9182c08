#include "dikin/cli.hpp"

int main(int argc, char** argv) { return dikin::run_cli(argc, argv); }
