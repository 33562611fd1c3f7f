#pragma once

#include <vector>

namespace ovals::detail {

// Inward integration of u'' = (1+u'^2)((y/2)u' - u/2 + (n-1)/u) from the two-term seed at Y
// with odeint's Rosenbrock stepper.  Output heights must be decreasing and lie in [y_end, Y].
struct FarField {
  std::vector<double> u, p;  // at the requested heights
  double u_end = 0.0, p_end = 0.0;
};

FarField trumpet_far_field(int n, double b, double Y, double y_end, const std::vector<double>& heights);

}  // namespace ovals::detail
