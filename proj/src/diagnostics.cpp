#include "chstrip/diagnostics.hpp"

#include <cmath>
#include <stdexcept>

#include "chstrip/errors.hpp"

namespace chstrip::diagnostics {

double mass_drift(const dynamics::TrajectoryRecord& rec) {
    if (rec.size() == 0) return 0.0;
    double drift = 0.0;
    for (const double m : rec.mass) drift = std::max(drift, std::abs(m - rec.mass.front()));
    return drift;
}

std::vector<LedgerRow> energy_ledger(const dynamics::TrajectoryRecord& rec) {
    std::vector<LedgerRow> rows;
    rows.reserve(rec.size());
    const double e0 = rec.size() ? rec.energy.front() : 0.0;
    for (std::size_t k = 0; k < rec.size(); ++k) {
        LedgerRow row;
        row.t = rec.times[k];
        row.energy = rec.energy[k];
        row.dissipation = rec.dissipation[k];
        row.work = rec.work[k];
        row.residual = rec.energy[k] - e0 + rec.dissipation[k] - rec.work[k];
        rows.push_back(row);
    }
    return rows;
}

SeparationReport separation_report(const dynamics::TrajectoryRecord& rec) {
    if (rec.size() == 0) throw std::invalid_argument("separation_report: empty record");
    auto margin = [](double lo, double hi) { return std::min(1.0 - hi, lo + 1.0); };
    SeparationReport rep;
    rep.initial_margin = margin(rec.min_value.front(), rec.max_value.front());
    rep.final_margin = margin(rec.min_value.back(), rec.max_value.back());
    rep.min_margin = rep.initial_margin;
    for (std::size_t k = 0; k < rec.size(); ++k)
        rep.min_margin = std::min(rep.min_margin, margin(rec.min_value[k], rec.max_value[k]));
    return rep;
}

BoundReport bound_monitor(const dynamics::GalerkinSystem& sys,
                          const dynamics::TrajectoryRecord& rec) {
    BoundReport rep;
    if (rec.size() == 0) return rep;
    // the recorded energy can be negative throughout, so the supremum starts
    // from the first row, not from zero
    rep.max_energy = rec.energy.front();
    const mesh::StripMesh& grid = sys.ops.mesh;
    for (std::size_t k = 0; k < rec.size(); ++k) {
        const Eigen::VectorXd& c = rec.rho[k];
        rep.max_v_norm_sq = std::max(
            rep.max_v_norm_sq,
            c.squaredNorm() + c.dot(sys.basis.eigenvalues.cwiseProduct(c)));
        const Eigen::VectorXd vals = sys.basis.modes * c;
        double l1 = 0.0;
        for (Eigen::Index i = 0; i < vals.size(); ++i) {
            l1 += grid.bulk_weights(i) *
                  std::abs(potentials::yosida(sys.bulk.graph, sys.yosida.bulk_step(), vals(i)));
            l1 += grid.boundary_weights(i) *
                  std::abs(potentials::yosida(sys.boundary.graph, sys.yosida.boundary_step(),
                                              vals(i)));
        }
        rep.max_beta_l1 = std::max(rep.max_beta_l1, l1);
        rep.max_energy = std::max(rep.max_energy, rec.energy[k]);
    }
    return rep;
}

namespace {

Eigen::VectorXd record_difference(const dynamics::TrajectoryRecord& a,
                                  const dynamics::TrajectoryRecord& b, std::size_t k) {
    Eigen::VectorXd d = a.rho[k] - b.rho[k];
    const double scale = 1.0 + d.norm();
    if (std::abs(d(0)) > 1e-8 * scale)
        throw PreconditionError("dependence diagnostics need equal generalized means");
    d(0) = 0.0;
    return d;
}

}  // namespace

double dependence_lhs(const dynamics::GalerkinSystem& sys,
                      const dynamics::TrajectoryRecord& a,
                      const dynamics::TrajectoryRecord& b) {
    if (a.size() != b.size() || a.size() == 0)
        throw std::invalid_argument("dependence_lhs: records do not share a time grid");
    for (std::size_t k = 0; k < a.size(); ++k)
        if (a.times[k] != b.times[k])
            throw std::invalid_argument("dependence_lhs: records do not share a time grid");

    const Eigen::VectorXd& lambda = sys.basis.eigenvalues;
    double sup_star = 0.0;
    double integral = 0.0;
    double sup_rate = 0.0;
    Eigen::VectorXd prev = record_difference(a, b, 0);
    auto v_norm_sq = [&](const Eigen::VectorXd& d) {
        return d.squaredNorm() + d.dot(lambda.cwiseProduct(d));
    };
    sup_star = spectral::star_norm(sys.basis, prev);
    double prev_sq = v_norm_sq(prev);
    for (std::size_t k = 1; k < a.size(); ++k) {
        const Eigen::VectorXd d = record_difference(a, b, k);
        sup_star = std::max(sup_star, spectral::star_norm(sys.basis, d));
        const double sq = v_norm_sq(d);
        const double h = a.times[k] - a.times[k - 1];
        integral += 0.5 * h * (prev_sq + sq);
        const Eigen::VectorXd rate = (d - prev) / h;
        sup_rate = std::max(sup_rate, std::sqrt(rate.dot(sys.b_matrix * rate)));
        prev = d;
        prev_sq = sq;
    }
    return sup_star + std::sqrt(integral) + sup_rate;
}

DependenceResult continuous_dependence(const dynamics::GalerkinSystem& sys,
                                       const DependenceParams& params) {
    const dynamics::TrajectoryRecord base = integrate(sys, params.initial, params.opts);
    const Eigen::MatrixXd w_raw = dynamics::advection_matrix_raw(sys.ops, sys.basis, params.perturbation);
    const Eigen::MatrixXd w_skew = dynamics::skew_project(w_raw);
    const double w_norm =
        velocity::l2l3_norm(params.perturbation, sys.ops.mesh, params.opts.t_end);

    DependenceResult res;
    for (const double delta : params.deltas) {
        if (delta < 0.0)
            throw std::invalid_argument("continuous_dependence: deltas must be nonnegative");
        dynamics::GalerkinSystem shifted = sys;
        shifted.advection += delta * w_skew;
        shifted.advection_raw += delta * w_raw;
        const dynamics::TrajectoryRecord run = integrate(shifted, params.initial, params.opts);
        const double lhs = dependence_lhs(sys, run, base);
        const double rhs = delta * w_norm;
        res.delta.push_back(delta);
        res.lhs.push_back(lhs);
        res.rhs.push_back(rhs);
        res.ratio.push_back(rhs > 0.0 ? lhs / rhs : (lhs == 0.0 ? 0.0 : INFINITY));
    }
    return res;
}

EpsResult epsilon_refinement(const dynamics::GalerkinSystem& sys,
                             const EpsStudyParams& params) {
    if (params.ladder.empty())
        throw std::invalid_argument("epsilon_refinement: empty ladder");
    for (std::size_t k = 1; k < params.ladder.size(); ++k)
        if (!(params.ladder[k] < params.ladder[k - 1]))
            throw std::invalid_argument("epsilon_refinement: ladder must decrease");

    EpsResult res;
    dynamics::TrajectoryRecord prev;
    for (std::size_t k = 0; k < params.ladder.size(); ++k) {
        dynamics::GalerkinSystem rung = sys;
        rung.yosida.eps = params.ladder[k];
        const dynamics::TrajectoryRecord rec = integrate(rung, params.initial, params.opts);
        double cauchy = 0.0;
        if (k > 0) {
            for (std::size_t t = 0; t < rec.size(); ++t)
                cauchy = std::max(cauchy, (rec.rho[t] - prev.rho[t]).norm());
        }
        res.eps.push_back(params.ladder[k]);
        res.cauchy_diff.push_back(cauchy);
        res.beta_norm.push_back(bound_monitor(rung, rec).max_beta_l1);
        prev = rec;
    }
    return res;
}

}  // namespace chstrip::diagnostics
