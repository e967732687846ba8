#include "nsgp/numdiff.hpp"

#include <cmath>

namespace nsgp {

Complex quad_integral_1d(const std::function<Complex(double)>& f, double lo, double hi,
                         int n_nodes) {
  if (!(lo < hi)) throw ValidationError("quad_integral_1d: requires lo < hi");
  if (n_nodes < 3 || n_nodes % 2 == 0) {
    throw ValidationError("quad_integral_1d: n_nodes must be odd and >= 3");
  }
  const double h = (hi - lo) / double(n_nodes - 1);
  Complex acc(0.0, 0.0);
  for (int i = 0; i < n_nodes; ++i) {
    const double u = lo + h * double(i);
    const Complex v = f(u);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw NonFiniteIntegrand("quad_integral_1d: non-finite integrand value");
    }
    const double w = (i == 0 || i == n_nodes - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    acc += w * v;
  }
  return acc * (h / 3.0);
}

Eigen::VectorXd finite_diff_grad(const std::function<double(const Eigen::VectorXd&)>& f,
                                 const Eigen::VectorXd& x, double step) {
  Eigen::VectorXd g(x.size());
  Eigen::VectorXd xp = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = step > 0.0 ? step : 1e-5 * (1.0 + std::abs(x[i]));
    const double xi = x[i];
    xp[i] = xi + h;
    const double fp = f(xp);
    xp[i] = xi - h;
    const double fm = f(xp);
    xp[i] = xi;
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

double finite_diff_second_dir(const std::function<double(const Eigen::VectorXd&)>& f,
                              const Eigen::VectorXd& x, const Eigen::VectorXd& v,
                              double step) {
  const double h = step > 0.0 ? step : 1e-3 * (1.0 + x.cwiseAbs().maxCoeff());
  const double f0 = f(x);
  const double fp = f(x + h * v);
  const double fm = f(x - h * v);
  return (fp - 2.0 * f0 + fm) / (h * h);
}

}  // namespace nsgp
