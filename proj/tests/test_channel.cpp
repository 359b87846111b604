#include "doctest.h"
#include "encsched/channel.hpp"
#include "encsched/errors.hpp"
#include "encsched/rng.hpp"
#include "support.hpp"

using namespace encsched;
using encsched::testing::reference_channel;

TEST_SUITE("channel") {

TEST_CASE("validate rejects out-of-range probabilities instead of clamping") {
  ChannelParams ch = reference_channel();
  SUBCASE("lambda above one") {
    ch.lambda = 1.2;
    CHECK_THROWS_AS(ch.validate(), ConfigError);
  }
  SUBCASE("negative eps1") {
    ch.eps1 = -0.1;
    CHECK_THROWS_AS(ch.validate(), ConfigError);
  }
  SUBCASE("lambda_e NaN-free bounds") {
    ch.lambda_e = 2.0;
    CHECK_THROWS_AS(ch.validate(), ConfigError);
  }
}

TEST_CASE("arrival probability per action") {
  const ChannelParams ch = reference_channel();
  CHECK(arrival_prob(0, ch) == doctest::Approx(0.7));
  CHECK(arrival_prob(1, ch) == doctest::Approx(0.63).epsilon(1e-12));

  ChannelParams noop = ch;
  noop.eps1 = 1.0;
  CHECK(arrival_prob(1, noop) == arrival_prob(0, noop));
}

TEST_CASE("eavesdrop probability per action") {
  const ChannelParams ch = reference_channel();
  CHECK(eavesdrop_prob(0, ch) == doctest::Approx(0.7));
  CHECK(eavesdrop_prob(1, ch) == doctest::Approx(0.126).epsilon(1e-12));

  ChannelParams sealed = ch;
  sealed.eps2 = 0.0;
  CHECK(eavesdrop_prob(1, sealed) == 0.0);
}

TEST_CASE("joint transition: hand-checked products") {
  const ChannelParams ch = reference_channel();
  const JointTransition plain = joint_transition(0, ch);
  CHECK(plain.p00 == doctest::Approx(0.09).epsilon(1e-12));
  CHECK(plain.p01 == doctest::Approx(0.21).epsilon(1e-12));
  CHECK(plain.p10 == doctest::Approx(0.21).epsilon(1e-12));
  CHECK(plain.p11 == doctest::Approx(0.49).epsilon(1e-12));

  const JointTransition enc = joint_transition(1, ch);
  CHECK(enc.p11 == doctest::Approx(0.63 * 0.126).epsilon(1e-12));
}

TEST_CASE("joint transition sums to one and marginals match, random parameters") {
  SplitMix64 rng(11);
  for (int i = 0; i < 200; ++i) {
    const ChannelParams ch{rng.next_double(), rng.next_double(), rng.next_double(),
                           rng.next_double()};
    for (int a : {0, 1}) {
      const JointTransition t = joint_transition(a, ch);
      CHECK(std::abs(t.p00 + t.p01 + t.p10 + t.p11 - 1.0) <= 1e-12);
      CHECK(std::abs(t.p10 + t.p11 - arrival_prob(a, ch)) <= 1e-15);
      CHECK(std::abs(t.p01 + t.p11 - eavesdrop_prob(a, ch)) <= 1e-15);
    }
  }
}

TEST_CASE("packet-erasure corner: eps1 = eps2 = 0 silences the encrypted slot") {
  ChannelParams ch = reference_channel();
  ch.eps1 = 0.0;
  ch.eps2 = 0.0;
  CHECK(arrival_prob(1, ch) == 0.0);
  CHECK(eavesdrop_prob(1, ch) == 0.0);
  CHECK(arrival_prob(0, ch) == doctest::Approx(0.7));
}

TEST_CASE("actions outside {0,1} are a bug, not an input") {
  CHECK_THROWS_AS(arrival_prob(2, reference_channel()), InternalError);
}

}  // TEST_SUITE
