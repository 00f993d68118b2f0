#include "rectm/cli.hpp"

int
main(int argc, char** argv)
{
  return rectm::cli::main(argc, argv);
}
