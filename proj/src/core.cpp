#include "rsum/core.hpp"

#include <cmath>
#include <utility>

namespace rsum {

void require_same_dim(const Vector& a, const Vector& b, const char* what) {
  if (a.size() != b.size()) {
    throw DimensionError(std::string(what) + ": dimension mismatch (" +
                         std::to_string(a.size()) + " vs " +
                         std::to_string(b.size()) + ")");
  }
}

double inner(const Vector& a, const Vector& b) {
  require_same_dim(a, b, "inner");
  return a.dot(b);
}

double norm(const Vector& a) { return std::sqrt(a.dot(a)); }

bool all_finite(const Vector& v) { return v.allFinite(); }

MonotoneOperator::MonotoneOperator(ResolventFn resolvent, std::string label)
    : resolvent_(std::move(resolvent)), label_(std::move(label)) {
  if (!resolvent_) throw ConfigError("MonotoneOperator: empty resolvent");
}

Vector MonotoneOperator::resolvent(double r, const Vector& x) const {
  if (!(r > 0.0)) {
    throw ConfigError(label_ + ": resolvent parameter must be positive");
  }
  return resolvent_(r, x);
}

ProxFunction::ProxFunction(ProxFn prox, std::string label, ValueFn value)
    : prox_(std::move(prox)), value_(std::move(value)), label_(std::move(label)) {
  if (!prox_) throw ConfigError("ProxFunction: empty prox");
}

Vector ProxFunction::prox(double t, const Vector& x) const {
  if (!(t > 0.0)) throw ConfigError(label_ + ": prox parameter must be positive");
  return prox_(t, x);
}

double ProxFunction::value(const Vector& x) const {
  if (!value_) throw std::logic_error(label_ + ": no value callable");
  return value_(x);
}

std::optional<ValueFn> ProxFunction::value_fn() const {
  if (!value_) return std::nullopt;
  return value_;
}

MonotoneOperator as_operator(const ProxFunction& f) {
  return MonotoneOperator(
      [f](double r, const Vector& x) { return f.prox(r, x); },
      "subdiff(" + f.label() + ")");
}

}  // namespace rsum
