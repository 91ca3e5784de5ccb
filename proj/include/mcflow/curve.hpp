#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>

namespace mcflow {

/// A closed curve given by a smooth 2*pi-periodic parametrization of R^n,
/// together with its first two parameter derivatives.
struct ParametrizedCurve {
    std::string name;
    int ambient_dim = 0;
    std::function<Eigen::VectorXd(double)> position;
    std::function<Eigen::VectorXd(double)> deriv1;
    std::function<Eigen::VectorXd(double)> deriv2;

    Eigen::VectorXd operator()(double theta) const { return position(theta); }
};

/// Samples |X'(theta)| at n_samples points and returns the minimum. Used to
/// reject non-immersed parametrizations before meshing.
double min_speed_sampled(const ParametrizedCurve& curve, int n_samples = 10000);

} // namespace mcflow
