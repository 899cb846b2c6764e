#include "commands.hpp"

int main(int argc, char** argv) { return rwam::app::run(argc, argv); }
