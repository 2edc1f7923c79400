#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>

#include "chstrip/mesh.hpp"

namespace chstrip::velocity {

/// Stationary velocity field on the strip, given by componentwise samplers.
/// Admissible fields are divergence free and tangential on both boundary
/// circles (u . nu = -+ uy = 0 on the rows y = 0 and y = ly).
struct VelocityField {
    std::function<double(double, double)> ux;
    std::function<double(double, double)> uy;
    std::string name = "zero";
};

VelocityField zero_field();

/// u = (a sin(2 pi y / ly), 0).
VelocityField shear_field(double amplitude, double ly);

/// u = curl of the stream function  psi = a sin(pi y / ly) cos(2 pi k x / lx),
/// which vanishes on both boundary circles, so u is tangential there.
VelocityField stream_function_field(double amplitude, int mode, double lx, double ly);

struct SampledVelocity {
    Eigen::VectorXd ux;
    Eigen::VectorXd uy;
};

SampledVelocity sample_velocity(const VelocityField& field, const mesh::StripMesh& mesh);

/// Tangency is exact for admissible fields; the discrete divergence of an
/// analytically divergence-free field decays with the mesh, so it is reported
/// rather than thresholded here.
struct FieldValidation {
    double max_boundary_normal = 0.0;
    double max_discrete_divergence = 0.0;

    bool tangential(double tol = 1e-12) const { return max_boundary_normal <= tol; }
};

FieldValidation validate_field(const VelocityField& field, const mesh::DiscreteOperators& ops);

/// || u ||_{L^2(0,T; L^3)} for the stationary field: sqrt(T) * ||u||_{L^3}.
double l2l3_norm(const VelocityField& field, const mesh::StripMesh& mesh, double t_end);

}  // namespace chstrip::velocity
