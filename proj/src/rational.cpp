#include "mcm/rational.hpp"

#include <cstdlib>

namespace mcm {

std::string decimal_string(const Rat& x) {
  mpf_class f(x, 256);
  char* buf = nullptr;
  gmp_asprintf(&buf, "%.15Fg", f.get_mpf_t());
  std::string out(buf);
  free(buf);
  return out;
}

}  // namespace mcm
