#include "avi/families.hpp"

#include <stdexcept>

namespace avi {

ScalarFamily ScalarFamily::from_name(std::string_view name, double shift) {
  if (name == "normal") return ScalarFamily(Kind::Normal, shift);
  if (name == "exponential") return ScalarFamily(Kind::Exponential, shift);
  if (name == "rademacher") return ScalarFamily(Kind::Rademacher, shift);
  if (name == "bernoulli") return ScalarFamily(Kind::Bernoulli, shift);
  if (name == "constant") return ScalarFamily(Kind::Constant, shift);
  throw std::invalid_argument("unknown distribution family '" + std::string(name) + "'");
}

std::vector<std::string> ScalarFamily::names() {
  return {"normal", "exponential", "rademacher", "bernoulli", "constant"};
}

std::string ScalarFamily::name() const {
  switch (kind_) {
    case Kind::Normal:
      return "normal";
    case Kind::Exponential:
      return "exponential";
    case Kind::Rademacher:
      return "rademacher";
    case Kind::Bernoulli:
      return "bernoulli";
    case Kind::Constant:
      break;
  }
  return "constant";
}

}  // namespace avi
