#ifndef SNROBUST_LINALG3_HPP
#define SNROBUST_LINALG3_HPP

#include <array>

namespace snrobust {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<std::array<double, 3>, 3>;

Vec3 matvec(const Mat3& a, const Vec3& x);
Mat3 matmul(const Mat3& a, const Mat3& b);
double dot(const Vec3& x, const Vec3& y);
Mat3 outer(const Vec3& x, const Vec3& y);

double det3(const Mat3& a);
double norm_inf(const Mat3& a);

// Inverse by explicit adjugate. Writes the infinity-norm condition number
// estimate; throws ConditioningError when it exceeds `cond_guard`.
Mat3 inverse3(const Mat3& a, double* cond_out = nullptr,
              double cond_guard = 1e10);

// Sylvester criterion on the symmetrized matrix.
bool is_positive_definite(const Mat3& a);

}  // namespace snrobust

#endif  // SNROBUST_LINALG3_HPP
