#pragma once

#include <functional>

#include <Eigen/Dense>

namespace trimon {

struct NelderMeadOptions {
  double initial_step = 0.1;   ///< edge length of the starting simplex
  double tolerance = 1e-10;    ///< stop when the best value improves less than this ...
  int window = 50;             ///< ... over this many iterations
  int max_evaluations = 200000;
  bool adaptive = true;        ///< dimension-dependent coefficients
};

struct NelderMeadResult {
  Eigen::VectorXd x;
  double value = 0.0;
  int evaluations = 0;
  int iterations = 0;
  bool converged = false;
};

using Objective = std::function<double(const Eigen::VectorXd&)>;

/// Derivative-free minimisation. The returned point is never worse than x0.
NelderMeadResult nelder_mead_minimize(const Objective& f, const Eigen::VectorXd& x0,
                                      const NelderMeadOptions& options = {});

}  // namespace trimon
