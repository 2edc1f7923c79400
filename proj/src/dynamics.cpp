#include "chstrip/dynamics.hpp"

#include <cmath>

#include "chstrip/errors.hpp"

namespace chstrip::dynamics {

namespace {

// 1/(lambda_j + kappa); at kappa = 0 the first entry is never used (the
// first mode is frozen) and is set to zero so stray products vanish.
Eigen::VectorXd dn_inverse(const GalerkinSystem& sys) {
    Eigen::VectorXd inv(sys.n_modes());
    for (int j = 0; j < sys.n_modes(); ++j)
        inv(j) = (j == 0 && sys.kappa == 0.0) ? 0.0 : 1.0 / sys.dn(j);
    return inv;
}

// Modal load and Jacobian of the chosen potential pieces.
Eigen::VectorXd modal_load(const GalerkinSystem& sys, const Eigen::VectorXd& rho,
                           bool with_beta, bool with_pi) {
    const Eigen::VectorXd vals = sys.basis.modes * rho;
    const mesh::StripMesh& mesh = sys.ops.mesh;
    Eigen::VectorXd load(vals.size());
    for (Eigen::Index k = 0; k < vals.size(); ++k) {
        double fb = 0.0, fg = 0.0;
        if (with_beta) {
            fb += yosida(sys.bulk.graph, sys.yosida.bulk_step(), vals(k));
            fg += yosida(sys.boundary.graph, sys.yosida.boundary_step(), vals(k));
        }
        if (with_pi) {
            fb += sys.bulk.pi(vals(k));
            fg += sys.boundary.pi(vals(k));
        }
        load(k) = mesh.bulk_weights(k) * fb + mesh.boundary_weights(k) * fg;
    }
    return sys.basis.modes.transpose() * load;
}

Eigen::MatrixXd modal_load_jacobian(const GalerkinSystem& sys, const Eigen::VectorXd& rho,
                                    bool with_beta, bool with_pi) {
    const Eigen::VectorXd vals = sys.basis.modes * rho;
    const mesh::StripMesh& mesh = sys.ops.mesh;
    Eigen::VectorXd diag(vals.size());
    for (Eigen::Index k = 0; k < vals.size(); ++k) {
        double db = 0.0, dg = 0.0;
        if (with_beta) {
            db += yosida_derivative(sys.bulk.graph, sys.yosida.bulk_step(), vals(k));
            dg += yosida_derivative(sys.boundary.graph, sys.yosida.boundary_step(), vals(k));
        }
        if (with_pi) {
            db += sys.bulk.pi_prime(vals(k));
            dg += sys.boundary.pi_prime(vals(k));
        }
        diag(k) = mesh.bulk_weights(k) * db + mesh.boundary_weights(k) * dg;
    }
    return sys.basis.modes.transpose() * diag.asDiagonal() * sys.basis.modes;
}

struct NewtonFailure {};

// Shared implicit solve: find z with
//   (Dn^{-1}+B)(z - rho)/dt + D z + implicit(z) + constant = 0
// on the active modes. `advect_implicit` folds -Dn^{-1} U z into the system.
struct ImplicitStep {
    const GalerkinSystem& sys;
    double dt;
    double newton_tol;
    bool beta_implicit = true;
    bool pi_implicit = true;
    bool advect_implicit = true;

    StepResult run(const Eigen::VectorXd& rho) const {
        const int m = sys.n_modes();
        const int lo = sys.kappa > 0.0 ? 0 : 1;
        const int nr = m - lo;
        const Eigen::VectorXd dninv = dn_inverse(sys);
        Eigen::MatrixXd mass = sys.b_matrix;
        mass.diagonal() += dninv;

        Eigen::VectorXd constant = Eigen::VectorXd::Zero(m);
        if (!pi_implicit) constant += modal_load(sys, rho, false, true);
        if (!advect_implicit)
            constant -= dninv.cwiseProduct(sys.advection * rho);

        const double scale = 1.0 + rho.cwiseAbs().maxCoeff();
        Eigen::VectorXd z = rho;
        StepResult result;
        bool converged = false;
        for (int it = 0; it < 50; ++it) {
            Eigen::VectorXd residual = mass * ((z - rho) / dt) +
                                       sys.basis.eigenvalues.cwiseProduct(z) +
                                       modal_load(sys, z, beta_implicit, pi_implicit) +
                                       constant;
            if (advect_implicit)
                residual -= dninv.cwiseProduct(sys.advection * z);
            if (!residual.allFinite()) throw NewtonFailure{};
            if (residual.segment(lo, nr).cwiseAbs().maxCoeff() <= newton_tol * scale) {
                result.newton_iterations = it;
                converged = true;
                break;
            }
            Eigen::MatrixXd jac = mass / dt;
            jac.diagonal() += sys.basis.eigenvalues;
            jac += modal_load_jacobian(sys, z, beta_implicit, pi_implicit);
            if (advect_implicit)
                jac -= dninv.asDiagonal() * sys.advection;
            const Eigen::VectorXd dz = jac.block(lo, lo, nr, nr)
                                           .partialPivLu()
                                           .solve(residual.segment(lo, nr));
            if (!dz.allFinite()) throw NewtonFailure{};
            z.segment(lo, nr) -= dz;
            result.newton_iterations = it + 1;
        }
        if (!converged) throw NewtonFailure{};

        const Eigen::VectorXd rho_dot = (z - rho) / dt;
        result.mu = chemical_potential(sys, z, rho_dot);
        if (!pi_implicit) {
            // the consistent potential of the split uses the explicit pi value
            result.mu += modal_load(sys, rho, false, true) - modal_load(sys, z, false, true);
        }
        result.rho = std::move(z);
        return result;
    }
};

}  // namespace

Eigen::MatrixXd advection_matrix_raw(const mesh::DiscreteOperators& ops, const spectral::EigenBasis& basis,
                                     const velocity::VelocityField& velocity) {
    const velocity::SampledVelocity s = sample_velocity(velocity, ops.mesh);
    const Eigen::MatrixXd gx = ops.grad_x * basis.modes;
    const Eigen::MatrixXd gy = ops.grad_y * basis.modes;
    const Eigen::MatrixXd p = s.ux.asDiagonal() * gx + s.uy.asDiagonal() * gy;
    return p.transpose() * ops.mesh.bulk_weights.asDiagonal() * basis.modes;
}

Eigen::MatrixXd skew_project(const Eigen::MatrixXd& raw) {
    Eigen::MatrixXd u = 0.5 * (raw - raw.transpose());
    u.row(0).setZero();
    u.col(0).setZero();
    return u;
}

GalerkinSystem assemble_system(const mesh::DiscreteOperators& ops, const spectral::EigenBasis& basis,
                               const potentials::PotentialSplit& bulk, const potentials::PotentialSplit& boundary,
                               const potentials::YosidaParams& yosida, double tau_bulk,
                               double tau_boundary, double kappa,
                               const velocity::VelocityField& velocity) {
    if (!(yosida.eps > 0.0) || !(yosida.eta > 0.0))
        throw ConfigError("eps and eta must be positive");
    if (tau_bulk < 0.0 || tau_boundary < 0.0 || kappa < 0.0)
        throw ConfigError("tau_bulk, tau_bdry and kappa must be nonnegative");

    GalerkinSystem sys;
    sys.ops = ops;
    sys.basis = basis;
    sys.bulk = bulk;
    sys.boundary = boundary;
    sys.yosida = yosida;
    sys.tau_bulk = tau_bulk;
    sys.tau_boundary = tau_boundary;
    sys.kappa = kappa;

    const Eigen::VectorXd w = tau_bulk * ops.mesh.bulk_weights +
                              tau_boundary * ops.mesh.boundary_weights;
    const Eigen::MatrixXd gram = basis.modes.transpose() * w.asDiagonal() * basis.modes;
    // the product is symmetric only up to rounding; the steppers and the
    // rate norms want the exact form
    sys.b_matrix = 0.5 * (gram + gram.transpose());
    sys.advection_raw = advection_matrix_raw(ops, basis, velocity);
    sys.advection = skew_project(sys.advection_raw);
    sys.dn = basis.eigenvalues.array() + kappa;
    return sys;
}

Eigen::VectorXd nonlinear_term(const GalerkinSystem& sys, const Eigen::VectorXd& rho) {
    return modal_load(sys, rho, true, true);
}

Eigen::MatrixXd nonlinear_jacobian(const GalerkinSystem& sys, const Eigen::VectorXd& rho) {
    return modal_load_jacobian(sys, rho, true, true);
}

double energy(const GalerkinSystem& sys, const Eigen::VectorXd& rho) {
    const Eigen::VectorXd vals = sys.basis.modes * rho;
    const mesh::StripMesh& mesh = sys.ops.mesh;
    double pot = 0.0;
    for (Eigen::Index k = 0; k < vals.size(); ++k) {
        const double r = vals(k);
        pot += mesh.bulk_weights(k) *
               (moreau_envelope(sys.bulk.graph, sys.yosida.bulk_step(), r) + sys.bulk.pi_hat(r));
        pot += mesh.boundary_weights(k) *
               (moreau_envelope(sys.boundary.graph, sys.yosida.boundary_step(), r) +
                sys.boundary.pi_hat(r));
    }
    return 0.5 * rho.dot(sys.basis.eigenvalues.cwiseProduct(rho)) + pot;
}

Eigen::VectorXd chemical_potential(const GalerkinSystem& sys, const Eigen::VectorXd& rho,
                                   const Eigen::VectorXd& rho_dot) {
    return sys.b_matrix * rho_dot + sys.basis.eigenvalues.cwiseProduct(rho) +
           nonlinear_term(sys, rho);
}

Eigen::VectorXd initial_slope(const GalerkinSystem& sys, const Eigen::VectorXd& rho) {
    const int m = sys.n_modes();
    const int lo = sys.kappa > 0.0 ? 0 : 1;
    const int nr = m - lo;
    const Eigen::VectorXd dninv = dn_inverse(sys);
    Eigen::MatrixXd mass = sys.b_matrix;
    mass.diagonal() += dninv;
    Eigen::VectorXd rhs = -(sys.basis.eigenvalues.cwiseProduct(rho) -
                            dninv.cwiseProduct(sys.advection * rho) +
                            nonlinear_term(sys, rho));
    Eigen::VectorXd slope = Eigen::VectorXd::Zero(m);
    slope.segment(lo, nr) =
        mass.block(lo, lo, nr, nr).ldlt().solve(rhs.segment(lo, nr));
    return slope;
}

Eigen::VectorXd project_initial_datum(const GalerkinSystem& sys, const mesh::FunctionPair& datum) {
    const double mean = generalized_mean(datum, sys.ops.mesh);
    if (!sys.bulk.graph.in_domain_interior(mean) ||
        !sys.boundary.graph.in_domain_interior(mean))
        throw PreconditionError(
            "initial generalized mean must be interior to both graph domains");
    return project(sys.basis, datum.values);
}

Stepper stepper_from_name(const std::string& name) {
    if (name == "backward_euler" || name == "be") return Stepper::BackwardEuler;
    if (name == "convex_split" || name == "split") return Stepper::ConvexSplit;
    throw ConfigError("unknown stepper: " + name);
}

std::string stepper_name(Stepper s) {
    return s == Stepper::BackwardEuler ? "backward_euler" : "convex_split";
}

StepResult step_backward_euler(const GalerkinSystem& sys, const Eigen::VectorXd& rho,
                               double dt, double newton_tol) {
    try {
        return ImplicitStep{sys, dt, newton_tol, true, true, true}.run(rho);
    } catch (const NewtonFailure&) {
        throw NumericalError("backward Euler Newton iteration stalled");
    }
}

StepResult step_convex_split(const GalerkinSystem& sys, const Eigen::VectorXd& rho,
                             double dt, double newton_tol) {
    try {
        return ImplicitStep{sys, dt, newton_tol, true, false, false}.run(rho);
    } catch (const NewtonFailure&) {
        throw NumericalError("convex split Newton iteration stalled");
    }
}

namespace {

struct Accumulators {
    double dissipation = 0.0;
    double work = 0.0;
    long newton = 0;
    int halvings = 0;
};

Eigen::VectorXd advance(const GalerkinSystem& sys, const Eigen::VectorXd& rho, double h,
                        const IntegrateOptions& opts, int depth, Accumulators& acc,
                        Eigen::VectorXd& mu_out) {
    StepResult r;
    try {
        r = opts.stepper == Stepper::BackwardEuler
                ? step_backward_euler(sys, rho, h, opts.newton_tol)
                : step_convex_split(sys, rho, h, opts.newton_tol);
    } catch (const NumericalError&) {
        if (depth >= opts.max_halvings) throw;
        ++acc.halvings;
        Eigen::VectorXd mid_mu;
        const Eigen::VectorXd mid = advance(sys, rho, 0.5 * h, opts, depth + 1, acc, mid_mu);
        return advance(sys, mid, 0.5 * h, opts, depth + 1, acc, mu_out);
    }
    acc.newton += r.newton_iterations;
    const Eigen::VectorXd rho_dot = (r.rho - rho) / h;
    acc.dissipation += h * (r.mu.dot(sys.basis.eigenvalues.cwiseProduct(r.mu)) +
                            sys.kappa * r.mu.squaredNorm() +
                            rho_dot.dot(sys.b_matrix * rho_dot));
    // the split applies the advection to the old state, the implicit step to the new
    const Eigen::VectorXd& transported =
        opts.stepper == Stepper::ConvexSplit ? rho : r.rho;
    acc.work += h * r.mu.dot(sys.advection * transported);
    mu_out = std::move(r.mu);
    return r.rho;
}

}  // namespace

TrajectoryRecord integrate(const GalerkinSystem& sys, const Eigen::VectorXd& rho0,
                           const IntegrateOptions& opts) {
    if (!(opts.dt > 0.0)) throw ConfigError("dt must be positive");
    if (!(opts.t_end >= 0.0)) throw ConfigError("t_end must be nonnegative");
    if (opts.output_every < 1) throw ConfigError("output_every must be >= 1");
    if (rho0.size() != sys.n_modes())
        throw std::invalid_argument("integrate: initial state has wrong mode count");

    const double sqrt_measure = std::sqrt(sys.basis.mass.sum());
    TrajectoryRecord rec;
    Accumulators acc;

    auto push = [&](double t, const Eigen::VectorXd& rho, const Eigen::VectorXd& mu) {
        const Eigen::VectorXd vals = sys.basis.modes * rho;
        rec.times.push_back(t);
        rec.rho.push_back(rho);
        rec.mu.push_back(mu);
        rec.mass.push_back(rho(0) / sqrt_measure);
        rec.energy.push_back(energy(sys, rho));
        rec.min_value.push_back(vals.minCoeff());
        rec.max_value.push_back(vals.maxCoeff());
        rec.dissipation.push_back(acc.dissipation);
        rec.work.push_back(acc.work);
    };

    Eigen::VectorXd rho = rho0;
    push(0.0, rho, chemical_potential(sys, rho, initial_slope(sys, rho)));

    // full steps by floor so a fractional remainder becomes a short tail step
    // and the record always ends exactly at t_end
    const long nsteps =
        std::max<long>(0, static_cast<long>(std::floor(opts.t_end / opts.dt + 1e-9)));
    const double tail = opts.t_end - static_cast<double>(nsteps) * opts.dt;
    const bool has_tail = tail > 1e-12 * std::max(opts.dt, opts.t_end);

    Eigen::VectorXd mu;
    for (long k = 1; k <= nsteps; ++k) {
        rho = advance(sys, rho, opts.dt, opts, 0, acc, mu);
        if (k % opts.output_every == 0 || (k == nsteps && !has_tail))
            push(static_cast<double>(k) * opts.dt, rho, mu);
    }
    if (has_tail) {
        rho = advance(sys, rho, tail, opts, 0, acc, mu);
        push(opts.t_end, rho, mu);
    }

    rec.total_newton_iterations = acc.newton;
    rec.step_halvings = acc.halvings;
    return rec;
}

}  // namespace chstrip::dynamics
