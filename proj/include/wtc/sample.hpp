#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace wtc {

/// A strictly positive sample with the views the estimators consume.
class SampleSummary {
 public:
  /// Throws DomainError unless every value is finite and > 0.
  explicit SampleSummary(std::vector<double> raw);

  std::size_t size() const noexcept { return raw_.size(); }
  std::span<const double> raw() const noexcept { return raw_; }
  /// Ascending order statistics.
  std::span<const double> sorted() const noexcept { return sorted_; }

  /// Observations >= 1, in input order.
  std::vector<double> truncated() const;
  /// m = #{i : X_i >= 1}.
  std::size_t truncated_count() const noexcept { return truncated_count_; }
  /// max(X_i, x0) for every observation.
  std::vector<double> censored(double x0) const;

 private:
  std::vector<double> raw_;
  std::vector<double> sorted_;
  std::size_t truncated_count_ = 0;
};

}  // namespace wtc
