#pragma once

#include <functional>

namespace nslab {

// Adaptive Gauss-Kronrod on [a, b]; throws QuadratureError when the error
// estimate stays above rel_tol * max(|I|, abs_floor).
double integrate_adaptive(const std::function<double(double)>& f, double a, double b, double rel_tol = 1e-10,
                          double abs_floor = 1e-300);

}  // namespace nslab
