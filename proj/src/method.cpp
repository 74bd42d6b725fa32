#include "hbvm/method.hpp"

#include <stdexcept>
#include <utility>

namespace hbvm {

Method::Method(QuadratureRule rule, int s) : rule_(std::move(rule)), s_(s) {
  if (s < 1 || s > rule_.stages()) {
    throw std::invalid_argument("Method: need 1 <= s <= k");
  }
  const StructureMatrices m = build_structure(rule_, s_);
  projection_ = m.P_s.transpose() * m.omega.asDiagonal();
  integrals_ = m.I_s;
  coupling_ = projection_ * integrals_;
}

Method Method::gauss(int k, int s) { return Method(gauss_rule(k), s); }

std::string Method::label() const {
  return "HBVM(" + std::to_string(stages()) + "," + std::to_string(s_) + ")";
}

}  // namespace hbvm
