#include "snrobust/linalg3.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "snrobust/errors.hpp"

namespace snrobust {

Vec3 matvec(const Mat3& a, const Vec3& x) {
  Vec3 y{};
  for (int i = 0; i < 3; ++i)
    y[i] = a[i][0] * x[0] + a[i][1] * x[1] + a[i][2] * x[2];
  return y;
}

Mat3 matmul(const Mat3& a, const Mat3& b) {
  Mat3 c{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j] + a[i][2] * b[2][j];
  return c;
}

double dot(const Vec3& x, const Vec3& y) {
  return x[0] * y[0] + x[1] * y[1] + x[2] * y[2];
}

Mat3 outer(const Vec3& x, const Vec3& y) {
  Mat3 m{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m[i][j] = x[i] * y[j];
  return m;
}

double det3(const Mat3& a) {
  return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
         a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
         a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
}

double norm_inf(const Mat3& a) {
  double n = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double row = std::abs(a[i][0]) + std::abs(a[i][1]) + std::abs(a[i][2]);
    n = std::max(n, row);
  }
  return n;
}

Mat3 inverse3(const Mat3& a, double* cond_out, double cond_guard) {
  const double d = det3(a);
  if (d == 0.0)
    throw ConditioningError("inverse3: exactly singular matrix",
                            std::numeric_limits<double>::infinity());
  Mat3 adj;
  adj[0][0] = a[1][1] * a[2][2] - a[1][2] * a[2][1];
  adj[0][1] = a[0][2] * a[2][1] - a[0][1] * a[2][2];
  adj[0][2] = a[0][1] * a[1][2] - a[0][2] * a[1][1];
  adj[1][0] = a[1][2] * a[2][0] - a[1][0] * a[2][2];
  adj[1][1] = a[0][0] * a[2][2] - a[0][2] * a[2][0];
  adj[1][2] = a[0][2] * a[1][0] - a[0][0] * a[1][2];
  adj[2][0] = a[1][0] * a[2][1] - a[1][1] * a[2][0];
  adj[2][1] = a[0][1] * a[2][0] - a[0][0] * a[2][1];
  adj[2][2] = a[0][0] * a[1][1] - a[0][1] * a[1][0];
  Mat3 inv;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) inv[i][j] = adj[i][j] / d;
  const double cond = norm_inf(a) * norm_inf(inv);
  if (cond_out) *cond_out = cond;
  if (cond > cond_guard)
    throw ConditioningError(
        "inverse3: condition number " + std::to_string(cond) +
            " exceeds guard " + std::to_string(cond_guard),
        cond);
  return inv;
}

bool is_positive_definite(const Mat3& a) {
  Mat3 s;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) s[i][j] = 0.5 * (a[i][j] + a[j][i]);
  const double m1 = s[0][0];
  const double m2 = s[0][0] * s[1][1] - s[0][1] * s[1][0];
  const double m3 = det3(s);
  return m1 > 0.0 && m2 > 0.0 && m3 > 0.0;
}

}  // namespace snrobust
