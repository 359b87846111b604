#pragma once

namespace encsched {

// Bernoulli reception/eavesdropping parameters. Encrypting a packet
// (action 1) scales the legitimate arrival rate by eps1 and Eve's
// successful interception rate by eps2; action 0 transmits plain.
struct ChannelParams {
  double lambda;    // reception probability, plain packet
  double lambda_e;  // eavesdrop probability, plain packet
  double eps1;      // encryption impact factor on reception
  double eps2;      // decryption probability factor for Eve

  // All four fields must lie in [0, 1]. Out-of-range input is a
  // configuration error, never silently clamped.
  void validate() const;
};

// Joint distribution of one slot's outcome pair (gamma, gamma_e).
// Index order is (remote success bit, eavesdropper success bit):
// p01 is "remote failed, Eve succeeded". Components sum to 1.
struct JointTransition {
  double p00;
  double p01;
  double p10;
  double p11;
};

// P(gamma = 1 | action): lambda for plain, eps1 * lambda for encrypted.
double arrival_prob(int action, const ChannelParams& ch);

// P(gamma_e = 1 | action): lambda_e for plain, eps2 * lambda_e for encrypted.
double eavesdrop_prob(int action, const ChannelParams& ch);

// Product measure of the two independent Bernoulli outcomes.
JointTransition joint_transition(int action, const ChannelParams& ch);

}  // namespace encsched
