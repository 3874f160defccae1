#include "ltcn/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ltcn {

TransferKind transfer_kind_from_string(std::string_view name) {
  if (name == "sigmoid") return TransferKind::Sigmoid;
  if (name == "tanh") return TransferKind::Tanh;
  throw std::invalid_argument("unknown transfer function '" + std::string(name) +
                              "' (expected sigmoid or tanh)");
}

std::string to_string(TransferKind kind) {
  return kind == TransferKind::Sigmoid ? "sigmoid" : "tanh";
}

TransferFunction::TransferFunction(TransferKind kind, double epsilon)
    : kind_(kind), epsilon_(epsilon) {
  if (!(epsilon > 0.0 && epsilon < 0.5))
    throw std::invalid_argument("transfer epsilon must be in (0, 0.5)");
}

double TransferFunction::clip_low() const {
  return kind_ == TransferKind::Sigmoid ? epsilon_ : -(1.0 - epsilon_);
}

double TransferFunction::forward(double z) const {
  if (kind_ == TransferKind::Sigmoid) return 1.0 / (1.0 + std::exp(-z));
  return std::tanh(z);
}

double TransferFunction::inverse(double y) const {
  if (!(y > range_low() && y < range_high()))
    throw std::domain_error("transfer inverse undefined at " + std::to_string(y));
  if (kind_ == TransferKind::Sigmoid) return std::log(y / (1.0 - y));
  return std::atanh(y);
}

double TransferFunction::clip(double y) const {
  return std::clamp(y, clip_low(), clip_high());
}

Matrix TransferFunction::forward(const Matrix& z) const {
  return z.unaryExpr([this](double v) { return forward(v); });
}

Matrix TransferFunction::inverse(const Matrix& y) const {
  return y.unaryExpr([this](double v) { return inverse(v); });
}

Matrix TransferFunction::clip(const Matrix& y) const {
  return y.unaryExpr([this](double v) { return clip(v); });
}

} // namespace ltcn
