#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "ltcn/transfer.hpp"

using namespace ltcn;

namespace {
const TransferFunction sigmoid(TransferKind::Sigmoid);
const TransferFunction tanh_tf(TransferKind::Tanh);
} // namespace

TEST_CASE("forward values") {
  CHECK(sigmoid.forward(0.0) == 0.5);
  CHECK(tanh_tf.forward(0.0) == 0.0);
  // 1/(1+e^-2), evaluated at 30-digit precision.
  CHECK(sigmoid.forward(2.0) == doctest::Approx(0.8807970779778824).epsilon(1e-15));
  CHECK(sigmoid.forward(1e4) <= 1.0); // saturates but stays defined
}

TEST_CASE("inverse values and domain") {
  CHECK(sigmoid.inverse(0.5) == 0.0);
  CHECK(tanh_tf.inverse(0.0) == 0.0);
  CHECK(sigmoid.inverse(0.999) == doctest::Approx(6.906754778648554).epsilon(1e-15));
  CHECK_THROWS_AS((void)sigmoid.inverse(0.0), std::domain_error);
  CHECK_THROWS_AS((void)sigmoid.inverse(1.0), std::domain_error);
  CHECK_THROWS_AS((void)tanh_tf.inverse(-1.0), std::domain_error);
  CHECK_THROWS_AS((void)tanh_tf.inverse(2.0), std::domain_error);
}

TEST_CASE("inverse-friendly clipping") {
  CHECK(sigmoid.clip(0.0) == 0.001);
  CHECK(sigmoid.clip(0.4) == 0.4);
  CHECK(sigmoid.clip(1.0) == sigmoid.clip_high());
  CHECK(tanh_tf.clip(1.0) == 0.999);
  CHECK(tanh_tf.clip(-1.0) == tanh_tf.clip_low());
  CHECK(tanh_tf.clip_low() == doctest::Approx(-0.999));
}

TEST_CASE("epsilon validation") {
  CHECK_THROWS_AS(TransferFunction(TransferKind::Sigmoid, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(TransferFunction(TransferKind::Sigmoid, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(TransferFunction(TransferKind::Sigmoid, -0.1), std::invalid_argument);
}

TEST_CASE("round trip over the clipped range") {
  std::mt19937 rng(7);
  for (const auto& tf : {sigmoid, tanh_tf}) {
    std::uniform_real_distribution<double> u(tf.clip_low(), tf.clip_high());
    for (int i = 0; i < 2000; ++i) {
      const double y = u(rng);
      CHECK(std::abs(tf.forward(tf.inverse(y)) - y) <= 1e-12);
    }
    // Boundaries of the clipped range themselves.
    CHECK(std::abs(tf.forward(tf.inverse(tf.clip_low())) - tf.clip_low()) <= 1e-12);
    CHECK(std::abs(tf.forward(tf.inverse(tf.clip_high())) - tf.clip_high()) <= 1e-12);
  }
}

TEST_CASE("strict monotonicity on random pairs") {
  // Restricted to |z| <= 15: past that the outputs saturate to the same
  // double and strictness is not representable.
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-15.0, 15.0);
  for (const auto& tf : {sigmoid, tanh_tf}) {
    for (int i = 0; i < 1000; ++i) {
      double z1 = u(rng), z2 = u(rng);
      if (z1 == z2) continue;
      if (z1 > z2) std::swap(z1, z2);
      CHECK(tf.forward(z1) < tf.forward(z2));
    }
  }
}

TEST_CASE("argmax is invariant under the forward transform") {
  std::mt19937 rng(13);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (const auto& tf : {sigmoid, tanh_tf}) {
    for (int trial = 0; trial < 200; ++trial) {
      Matrix scores(1, 4);
      for (Index c = 0; c < 4; ++c) scores(0, c) = u(rng);
      Index raw_best = 0, transformed_best = 0;
      const Matrix transformed = tf.forward(scores);
      for (Index c = 1; c < 4; ++c) {
        if (scores(0, c) > scores(0, raw_best)) raw_best = c;
        if (transformed(0, c) > transformed(0, transformed_best)) transformed_best = c;
      }
      CHECK(raw_best == transformed_best);
    }
  }
}

TEST_CASE("kind parsing") {
  CHECK(transfer_kind_from_string("sigmoid") == TransferKind::Sigmoid);
  CHECK(transfer_kind_from_string("tanh") == TransferKind::Tanh);
  CHECK_THROWS_AS(transfer_kind_from_string("relu"), std::invalid_argument);
  CHECK(to_string(TransferKind::Sigmoid) == "sigmoid");
  CHECK(to_string(TransferKind::Tanh) == "tanh");
}
