#include "chstrip/velocity.hpp"

#include <cmath>
#include <numbers>

namespace chstrip::velocity {

VelocityField zero_field() {
    VelocityField f;
    f.ux = [](double, double) { return 0.0; };
    f.uy = [](double, double) { return 0.0; };
    f.name = "zero";
    return f;
}

VelocityField shear_field(double amplitude, double ly) {
    VelocityField f;
    f.ux = [amplitude, ly](double, double y) {
        return amplitude * std::sin(2.0 * std::numbers::pi * y / ly);
    };
    f.uy = [](double, double) { return 0.0; };
    f.name = "shear";
    return f;
}

VelocityField stream_function_field(double amplitude, int mode, double lx, double ly) {
    const double kx = 2.0 * std::numbers::pi * mode / lx;
    const double ky = std::numbers::pi / ly;
    VelocityField f;
    // (ux, uy) = (d_y psi, -d_x psi)
    f.ux = [=](double x, double y) {
        return amplitude * ky * std::cos(ky * y) * std::cos(kx * x);
    };
    f.uy = [=](double x, double y) {
        return amplitude * kx * std::sin(ky * y) * std::sin(kx * x);
    };
    f.name = "stream";
    return f;
}

SampledVelocity sample_velocity(const VelocityField& field, const mesh::StripMesh& mesh) {
    SampledVelocity s;
    s.ux.resize(mesh.dofs());
    s.uy.resize(mesh.dofs());
    for (int j = 0; j < mesh.ny; ++j)
        for (int i = 0; i < mesh.nx; ++i) {
            const int k = mesh.index(i, j);
            s.ux[k] = field.ux(mesh.x(i), mesh.y(j));
            s.uy[k] = field.uy(mesh.x(i), mesh.y(j));
        }
    return s;
}

FieldValidation validate_field(const VelocityField& field, const mesh::DiscreteOperators& ops) {
    const mesh::StripMesh& mesh = ops.mesh;
    const SampledVelocity s = sample_velocity(field, mesh);
    FieldValidation v;
    for (int i = 0; i < mesh.nx; ++i) {
        v.max_boundary_normal =
            std::max({v.max_boundary_normal, std::abs(s.uy[mesh.index(i, 0)]),
                      std::abs(s.uy[mesh.index(i, mesh.ny - 1)])});
    }
    const Eigen::VectorXd div = ops.grad_x * s.ux + ops.grad_y * s.uy;
    v.max_discrete_divergence = div.cwiseAbs().maxCoeff();
    return v;
}

double l2l3_norm(const VelocityField& field, const mesh::StripMesh& mesh, double t_end) {
    const SampledVelocity s = sample_velocity(field, mesh);
    const Eigen::VectorXd speed =
        (s.ux.cwiseProduct(s.ux) + s.uy.cwiseProduct(s.uy)).cwiseSqrt();
    const double cubed = mesh.bulk_weights.dot(speed.array().pow(3.0).matrix());
    return std::sqrt(t_end) * std::cbrt(cubed);
}

}  // namespace chstrip::velocity
