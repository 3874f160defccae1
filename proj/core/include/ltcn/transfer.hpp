#pragma once

#include <string>
#include <string_view>

#include "ltcn/types.hpp"

namespace ltcn {

enum class TransferKind { Sigmoid, Tanh };

TransferKind transfer_kind_from_string(std::string_view name);
std::string to_string(TransferKind kind);

/// Neuron transfer function with its inverse and the epsilon used to keep
/// values strictly inside the open activation range so the inverse stays
/// finite. Stateless apart from the configuration; safe to share.
class TransferFunction {
 public:
  explicit TransferFunction(TransferKind kind, double epsilon = 1e-3);

  TransferKind kind() const { return kind_; }
  double epsilon() const { return epsilon_; }

  // Open activation range of the function.
  double range_low() const { return kind_ == TransferKind::Sigmoid ? 0.0 : -1.0; }
  double range_high() const { return 1.0; }

  // Bounds of the inverse-friendly (clipped) range. These double as the
  // lo/hi values of the target encoding.
  double clip_low() const;
  double clip_high() const { return 1.0 - epsilon_; }

  double forward(double z) const;

  /// Inverse of forward. Throws std::domain_error when y is not strictly
  /// inside the open activation range.
  double inverse(double y) const;

  /// Clamp into [clip_low(), clip_high()]; in-range values pass through.
  double clip(double y) const;

  Matrix forward(const Matrix& z) const;
  Matrix inverse(const Matrix& y) const;
  Matrix clip(const Matrix& y) const;

 private:
  TransferKind kind_;
  double epsilon_;
};

} // namespace ltcn
