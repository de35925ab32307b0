#include "wtc/sample.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wtc/errors.hpp"

namespace wtc {

SampleSummary::SampleSummary(std::vector<double> raw) : raw_(std::move(raw)) {
  for (std::size_t i = 0; i < raw_.size(); ++i) {
    if (!(raw_[i] > 0.0) || !std::isfinite(raw_[i]))
      throw DomainError("sample values must be finite and > 0; observation " + std::to_string(i) + " is " +
                        std::to_string(raw_[i]));
  }
  sorted_ = raw_;
  std::sort(sorted_.begin(), sorted_.end());
  truncated_count_ = static_cast<std::size_t>(sorted_.end() - std::lower_bound(sorted_.begin(), sorted_.end(), 1.0));
}

std::vector<double> SampleSummary::truncated() const {
  std::vector<double> out;
  out.reserve(truncated_count_);
  std::copy_if(raw_.begin(), raw_.end(), std::back_inserter(out), [](double x) { return x >= 1.0; });
  return out;
}

std::vector<double> SampleSummary::censored(double x0) const {
  std::vector<double> out(raw_.size());
  std::transform(raw_.begin(), raw_.end(), out.begin(), [x0](double x) { return std::max(x, x0); });
  return out;
}

}  // namespace wtc
