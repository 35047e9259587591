#include "trimon/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <vector>

#include "trimon/errors.hpp"

namespace trimon {

NelderMeadResult nelder_mead_minimize(const Objective& f, const Eigen::VectorXd& x0,
                                      const NelderMeadOptions& options) {
  const int n = static_cast<int>(x0.size());
  if (n == 0) throw InvalidInput("cannot minimise over zero parameters");
  if (options.window < 1) throw InvalidInput("convergence window must be positive");

  const double dim = static_cast<double>(n);
  const double reflect = 1.0;
  const double expand = options.adaptive ? 1.0 + 2.0 / dim : 2.0;
  const double contract = options.adaptive ? 0.75 - 0.5 / dim : 0.5;
  const double shrink = options.adaptive ? 1.0 - 1.0 / dim : 0.5;

  NelderMeadResult result;
  auto eval = [&](const Eigen::VectorXd& x) {
    ++result.evaluations;
    const double v = f(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  };

  std::vector<Eigen::VectorXd> pts(n + 1, x0);
  std::vector<double> vals(n + 1);
  vals[0] = eval(x0);
  for (int i = 0; i < n; ++i) {
    const double step = x0(i) != 0.0 ? options.initial_step * std::max(1.0, std::abs(x0(i)))
                                     : options.initial_step;
    pts[i + 1](i) += step;
    vals[i + 1] = eval(pts[i + 1]);
  }

  std::vector<int> order(n + 1);
  std::deque<double> history;
  while (result.evaluations < options.max_evaluations) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return vals[a] < vals[b]; });
    const int best = order[0];
    const int worst = order[n];
    const int second = order[n - 1];

    history.push_back(vals[best]);
    if (static_cast<int>(history.size()) > options.window) {
      history.pop_front();
      if (history.front() - history.back() < options.tolerance) {
        result.converged = true;
        break;
      }
    }
    ++result.iterations;

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (int i = 0; i <= n; ++i) {
      if (i != worst) centroid += pts[i];
    }
    centroid /= dim;

    const Eigen::VectorXd xr = centroid + reflect * (centroid - pts[worst]);
    const double fr = eval(xr);
    if (fr < vals[best]) {
      const Eigen::VectorXd xe = centroid + expand * (xr - centroid);
      const double fe = eval(xe);
      if (fe < fr) {
        pts[worst] = xe;
        vals[worst] = fe;
      } else {
        pts[worst] = xr;
        vals[worst] = fr;
      }
      continue;
    }
    if (fr < vals[second]) {
      pts[worst] = xr;
      vals[worst] = fr;
      continue;
    }
    const bool outside = fr < vals[worst];
    const Eigen::VectorXd xc = outside ? Eigen::VectorXd(centroid + contract * (xr - centroid))
                                       : Eigen::VectorXd(centroid - contract * (centroid - pts[worst]));
    const double fc = eval(xc);
    if (fc < (outside ? fr : vals[worst])) {
      pts[worst] = xc;
      vals[worst] = fc;
      continue;
    }
    for (int i = 0; i <= n; ++i) {
      if (i == best) continue;
      pts[i] = pts[best] + shrink * (pts[i] - pts[best]);
      vals[i] = eval(pts[i]);
    }
  }

  const auto it = std::min_element(vals.begin(), vals.end());
  result.x = pts[static_cast<std::size_t>(it - vals.begin())];
  result.value = *it;
  return result;
}

}  // namespace trimon
