#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>

#include "nsgp/common.hpp"

namespace nsgp {

using Complex = std::complex<double>;

// Composite Simpson rule; n_nodes must be odd and >= 3. Error O(h^4) for
// smooth integrands. Throws NonFiniteIntegrand on non-finite values.
Complex quad_integral_1d(const std::function<Complex(double)>& f, double lo, double hi,
                         int n_nodes);

// Central differences (f(x+h e_i) - f(x-h e_i)) / 2h per coordinate.
// step <= 0 selects the default 1e-5 * (1 + |x_i|) per coordinate.
Eigen::VectorXd finite_diff_grad(const std::function<double(const Eigen::VectorXd&)>& f,
                                 const Eigen::VectorXd& x, double step = 0.0);

// Second directional derivative v^T (Hf) v via
// (f(x+hv) - 2 f(x) + f(x-hv)) / h^2.
// step <= 0 selects 1e-3 * (1 + |x|_inf).
double finite_diff_second_dir(const std::function<double(const Eigen::VectorXd&)>& f,
                              const Eigen::VectorXd& x, const Eigen::VectorXd& v,
                              double step = 0.0);

}  // namespace nsgp
