#pragma once

#include <Eigen/Core>

namespace hessdamp {

using Point = Eigen::VectorXd;
using Index = Eigen::Index;

inline bool all_finite(const Point& x) { return x.allFinite(); }

}  // namespace hessdamp
