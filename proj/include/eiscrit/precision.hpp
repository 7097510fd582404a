#pragma once
// Precision dispatch: long double up to 64 bits, MpReal above.

#include <cmath>
#include <vector>

#include "eiscrit/numkernel.hpp"

namespace eiscrit {

// Calls body.template operator()<T>() once at the requested precision.
template <class Body>
auto at_precision(int bits, Body&& body) {
  if (bits <= 64) return body.template operator()<long double>();
  PrecisionScope ps(bits);
  return body.template operator()<MpReal>();
}

// Runs body (returning std::vector<EvalResult>) at the budget precision, doubling
// the bits while some rounding estimate misses the budget target.
template <class Body>
std::vector<EvalResult> with_precision(const EvalBudget& b, Body&& body) {
  b.validate();
  int bits = b.working_precision_bits;
  for (;;) {
    std::vector<EvalResult> r = at_precision(bits, body);
    bool ok = true;
    for (const EvalResult& e : r) {
      Real mag = std::abs(e.value);
      if (e.rounding_bound > b.target_for(std::max<Real>(0, mag - e.error_bound()))) ok = false;
    }
    int used = bits <= 64 ? 64 : bits;
    for (EvalResult& e : r) e.precision_bits = used;
    if (ok || used * 2 > b.max_precision_bits) return r;
    bits = used * 2;
  }
}

}  // namespace eiscrit
