#pragma once

#include <ostream>

namespace fdx {

// Embedded fixture suite behind `fdx selftest`: prints one line per check and
// returns the number of failures.
int run_selftest(std::ostream& out);

}  // namespace fdx
