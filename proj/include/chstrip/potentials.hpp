#pragma once

#include <limits>
#include <span>
#include <string>

namespace chstrip::potentials {

enum class GraphKind {
    RegularCubic,    // beta(r) = r^3, from the quartic double well
    Logarithmic,     // beta(r) = ln((1+r)/(1-r)) on (-1,1)
    DoubleObstacle,  // beta = subdifferential of the indicator of [-1,1]
};

/// A maximal monotone graph on R with beta_hat(0) = 0 and 0 in beta(0).
struct MonotoneGraph {
    GraphKind kind = GraphKind::RegularCubic;
    // Arguments of the logarithmic beta are clamped this far inside (-1,1);
    // resolvent outputs are mathematically interior and never clamped.
    double log_margin = 1e-14;

    bool in_domain(double r) const;           // r in D(beta)
    bool in_domain_interior(double r) const;  // r in int D(beta)
};

MonotoneGraph make_graph(GraphKind kind);
GraphKind graph_kind_from_name(const std::string& name);
std::string graph_kind_name(GraphKind kind);

/// Domain inclusion D(boundary) subset of D(bulk), required for the
/// domination of the bulk graph by the boundary graph.
bool domain_compatible(GraphKind bulk, GraphKind boundary);

/// Unique s with  s + step * t = r  for some t in beta(s).
double resolvent(const MonotoneGraph& g, double step, double r);

/// beta_step(r) = (r - resolvent(r)) / step. Monotone, (1/step)-Lipschitz.
double yosida(const MonotoneGraph& g, double step, double r);

/// d/dr of yosida, a.e.; analytic via implicit differentiation.
double yosida_derivative(const MonotoneGraph& g, double step, double r);

/// Moreau envelope: |r - J|^2 / (2 step) + beta_hat(J), J the resolvent.
double moreau_envelope(const MonotoneGraph& g, double step, double r);

/// beta_hat(r); +infinity outside D(beta_hat).
double convex_primitive(const MonotoneGraph& g, double r);

/// Minimum-modulus element of beta(r); throws outside D(beta).
double minimal_section(const MonotoneGraph& g, double r);

/// The double-well splitting f = beta_hat + pi_hat with the linear
/// perturbation pi(r) = pi_slope * r.
struct PotentialSplit {
    MonotoneGraph graph;
    double pi_slope = 0.0;

    double pi(double r) const { return pi_slope * r; }
    double pi_prime(double) const { return pi_slope; }
    double pi_hat(double r) const { return 0.5 * pi_slope * r * r; }
    double pi_lipschitz() const { return pi_slope < 0 ? -pi_slope : pi_slope; }
};

/// pi = -r for the regular well; pi = -2cr for logarithmic (c > 1) and
/// double obstacle (c > 0).
PotentialSplit make_split(GraphKind kind, double c);

/// Regularization scales: the bulk graph is regularized at step eps, the
/// boundary graph at step eps * eta.
struct YosidaParams {
    double eps = 0.1;
    double eta = 1.0;
    double bulk_step() const { return eps; }
    double boundary_step() const { return eps * eta; }
};

/// Domination of the bulk graph by the boundary graph:
///   |beta°(r)|      <= eta |beta_G°(r)|      + C   on D(beta_G),
///   |beta_eps(r)|   <= eta |beta_G,eps(r)|   + C   on R,
/// and the fitted constant of the product bound
///   beta_G,eps(r) beta_eps(r) >= |beta_eps(r)|^2 / (2 eta) - C_eta.
struct CompatibilityReport {
    double max_raw_violation = 0.0;     // over samples in D(beta_G)
    double max_yosida_violation = 0.0;  // over all samples
    double fitted_c_eta = 0.0;
    int raw_samples_used = 0;
};

CompatibilityReport check_compatibility(const MonotoneGraph& bulk,
                                        const MonotoneGraph& boundary, double eta,
                                        double C, const YosidaParams& params,
                                        std::span<const double> samples);

/// Fit (delta0, C0) with  beta_step(r)(r - m0) >= delta0 |beta_step(r)| - C0
/// on the samples; m0 must be interior to D(beta).
struct CoercivityFit {
    double delta0 = 0.0;
    double c0 = 0.0;
};

CoercivityFit coercivity_check(const MonotoneGraph& g, double step, double m0,
                               std::span<const double> samples);

}  // namespace chstrip::potentials
