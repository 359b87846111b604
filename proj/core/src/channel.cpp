#include "encsched/channel.hpp"

#include <sstream>

#include "encsched/errors.hpp"

namespace encsched {

namespace {

void require_unit(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) {
    std::ostringstream os;
    os << name << ": must lie in [0,1], got " << v;
    throw ConfigError(os.str());
  }
}

void require_action(int action) {
  if (action != 0 && action != 1) {
    throw InternalError("action must be 0 or 1, got " + std::to_string(action));
  }
}

}  // namespace

void ChannelParams::validate() const {
  require_unit(lambda, "lambda");
  require_unit(lambda_e, "lambda_e");
  require_unit(eps1, "eps1");
  require_unit(eps2, "eps2");
}

double arrival_prob(int action, const ChannelParams& ch) {
  require_action(action);
  return action == 0 ? ch.lambda : ch.eps1 * ch.lambda;
}

double eavesdrop_prob(int action, const ChannelParams& ch) {
  require_action(action);
  return action == 0 ? ch.lambda_e : ch.eps2 * ch.lambda_e;
}

JointTransition joint_transition(int action, const ChannelParams& ch) {
  const double q = arrival_prob(action, ch);
  const double qe = eavesdrop_prob(action, ch);
  return JointTransition{(1.0 - q) * (1.0 - qe), (1.0 - q) * qe, q * (1.0 - qe), q * qe};
}

}  // namespace encsched
