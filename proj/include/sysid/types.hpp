#ifndef SYSID_TYPES_HPP
#define SYSID_TYPES_HPP

#include <Eigen/Dense>

namespace sysid {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// Row-major boolean grid (row = output coordinate, column = sample index).
using BoolGrid = Eigen::Array<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>;

}  // namespace sysid

#endif
