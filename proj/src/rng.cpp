#include "tilekl/rng.hpp"

namespace tilekl {

std::uint64_t entropy_seed()
{
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

}  // namespace tilekl
