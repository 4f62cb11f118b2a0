#include "qlid/errors.hpp"

#include <sstream>

namespace qlid {

namespace {

std::string no_solution_message(double target, double lo, double hi) {
    std::ostringstream msg;
    msg << "no phase reaches probability " << target << "; attainable range is [" << lo << ", "
        << hi << "]";
    return msg.str();
}

}  // namespace

NoSolutionError::NoSolutionError(double target, double attainable_min, double attainable_max)
    : std::runtime_error(no_solution_message(target, attainable_min, attainable_max)),
      target_(target),
      attainable_min_(attainable_min),
      attainable_max_(attainable_max) {}

}  // namespace qlid
