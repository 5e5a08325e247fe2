#include "tilekl/cli.hpp"

int main(int argc, char** argv)
{
  return tilekl::cli::main(argc, argv);
}
