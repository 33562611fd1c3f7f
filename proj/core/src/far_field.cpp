// Built as C++17: boost 1.74 ublas (used by rosenbrock4) relies on allocator members removed in C++20.
#include "far_field.hpp"

#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <stdexcept>

namespace ovals::detail {

namespace odeint = boost::numeric::odeint;
using vec = boost::numeric::ublas::vector<double>;
using mat = boost::numeric::ublas::matrix<double>;

FarField trumpet_far_field(int n, double b, double Y, double y_end, const std::vector<double>& heights) {
  // state (u, u_y) in s = -y
  auto f = [n](const vec& x, vec& dx, double s) {
    const double y = -s, u = x[0], p = x[1];
    dx[0] = -p;
    dx[1] = -(1 + p * p) * (0.5 * y * p - 0.5 * u + (n - 1) / u);
  };
  auto jac = [n](const vec& x, mat& J, double s, vec& dfdt) {
    const double y = -s, u = x[0], p = x[1], q = 1 + p * p;
    const double g = 0.5 * y * p - 0.5 * u + (n - 1) / u;
    J(0, 0) = 0;
    J(0, 1) = -1;
    J(1, 0) = q * (0.5 + (n - 1) / (u * u));
    J(1, 1) = -(2 * p * g + 0.5 * q * y);
    dfdt[0] = 0;
    dfdt[1] = 0.5 * q * p;
  };
  auto stepper = odeint::make_dense_output(1e-10, 1e-10, odeint::rosenbrock4<double>());
  vec x(2), xo(2);
  x[0] = b * Y + (n - 1) / (b * Y);
  x[1] = b - (n - 1) / (b * Y * Y);
  stepper.initialize(x, -Y, 1e-3);
  stepper.do_step(std::make_pair(f, jac));  // calc_state needs a completed step

  FarField out;
  auto advance_to = [&](double y) {
    while (stepper.current_time() < -y) {
      stepper.do_step(std::make_pair(f, jac));
      if (!std::isfinite(stepper.current_state()[0]))
        throw std::runtime_error("non-finite state in the trumpet far field");
    }
    stepper.calc_state(-y, xo);
  };
  for (double y : heights) {
    advance_to(y);
    out.u.push_back(xo[0]);
    out.p.push_back(xo[1]);
  }
  advance_to(y_end);
  out.u_end = xo[0];
  out.p_end = xo[1];
  return out;
}

}  // namespace ovals::detail
