#include "fogdrip/errors.hpp"

#include <sstream>

namespace fogdrip {

namespace {

std::string incompatible_message(std::size_t a, std::size_t b, IncompatibleFamily::Rule rule) {
  std::ostringstream os;
  os << "contours " << a << " and " << b << " are incompatible: "
     << (rule == IncompatibleFamily::Rule::kInteriorsOverlap
             ? "interiors neither disjoint nor nested"
             : "shared bond with opposite orientation");
  return os.str();
}

std::string fitting_message(double R, double required) {
  std::ostringstream os;
  os << "critical droplet does not fit into the box: R = " << R << " but R >= " << required
     << " is required";
  return os.str();
}

}  // namespace

IncompatibleFamily::IncompatibleFamily(std::size_t first, std::size_t second, Rule rule)
    : std::runtime_error(incompatible_message(first, second, rule)),
      first_(first),
      second_(second),
      rule_(rule) {}

FittingConditionError::FittingConditionError(double R, double required_R)
    : std::runtime_error(fitting_message(R, required_R)), R_(R), required_R_(required_R) {}

}  // namespace fogdrip
