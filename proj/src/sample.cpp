#include "snrobust/sample.hpp"

#include <cmath>

#include "snrobust/errors.hpp"

namespace snrobust {

void Sample::validate() const {
  if (values.empty()) throw DataError("Sample: empty");
  for (double v : values)
    if (!std::isfinite(v)) throw DataError("Sample: non-finite value");
}

double Sample::mean() const {
  validate();
  double s = 0.0;
  for (double v : values) s += v;
  return s / static_cast<double>(values.size());
}

double Sample::sd() const {
  const double m = mean();
  if (values.size() < 2) throw DataError("Sample: sd needs n >= 2");
  double ss = 0.0;
  for (double v : values) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

double Sample::skewness() const {
  const double m = mean();
  double m2 = 0.0, m3 = 0.0;
  for (double v : values) {
    const double d = v - m;
    m2 += d * d;
    m3 += d * d * d;
  }
  const double n = static_cast<double>(values.size());
  m2 /= n;
  m3 /= n;
  if (m2 <= 0.0) throw DataError("Sample: zero variance");
  return m3 / std::pow(m2, 1.5);
}

}  // namespace snrobust
