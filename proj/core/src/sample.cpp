#include "slt/sample.hpp"

#include <cmath>

#include <fmt/format.h>

#include "slt/errors.hpp"

namespace slt {

DimensionMismatch::DimensionMismatch(std::size_t expected, std::size_t actual)
    : InvalidArgument(fmt::format("dimension mismatch: expected {}, got {}", expected, actual)),
      expected_(expected),
      actual_(actual) {}

BudgetExceeded::BudgetExceeded(std::size_t budget, std::size_t required, const std::string& what)
    : Error(fmt::format("{}: requires {} but budget is {}", what, required, budget)),
      budget_(budget),
      required_(required) {}

Label label_from_int(long long v) {
  if (v == 0) return Label::Zero;
  if (v == 1) return Label::One;
  throw InvalidArgument(fmt::format("label must be 0 or 1, got {}", v));
}

Instance::Instance(std::vector<double> coords) : coords_(std::move(coords)) {
  if (coords_.empty()) throw InvalidArgument("instance must have dimension >= 1");
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (!std::isfinite(coords_[i])) {
      throw InvalidArgument(fmt::format("instance coordinate {} is not finite", i));
    }
  }
}

Instance::Instance(std::initializer_list<double> coords)
    : Instance(std::vector<double>(coords)) {}

LabeledSample::LabeledSample(std::vector<Example> pairs) {
  pairs_.reserve(pairs.size());
  for (auto& e : pairs) push_back(std::move(e));
}

void LabeledSample::push_back(Example e) {
  if (e.x.dimension() == 0) throw InvalidArgument("sample instance has dimension 0");
  if (pairs_.empty()) {
    dimension_ = e.x.dimension();
  } else if (e.x.dimension() != dimension_) {
    throw DimensionMismatch(dimension_, e.x.dimension());
  }
  pairs_.push_back(std::move(e));
}

}  // namespace slt
