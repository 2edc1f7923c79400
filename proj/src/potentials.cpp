#include "chstrip/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "chstrip/errors.hpp"

namespace chstrip::potentials {

namespace {

// ==================== resolvent root-finders ====================
// Both solve g(s) = s + step*beta(s) - r = 0 with g' >= 1, so a plain
// bracketed Newton cannot escape and bisection only fires on overshoot.
// Convergence is tested on the residual of the current iterate before the
// step, so a rejected step can never replace an already converged value.

double resolve_cubic(double step, double r) {
    double lo = std::min(0.0, r);
    double hi = std::max(0.0, r);
    double s = r / (1.0 + step * r * r);
    for (int it = 0; it < 200; ++it) {
        const double g = s + step * s * s * s - r;
        if (std::abs(g) <= 1e-15 * (1.0 + std::abs(r))) return s;
        (g > 0.0 ? hi : lo) = s;
        const double gp = 1.0 + 3.0 * step * s * s;
        double ns = s - g / gp;
        if (!(ns > lo && ns < hi)) ns = lo + 0.5 * (hi - lo);
        if (ns == s || ns == lo || ns == hi) return s;
        s = ns;
    }
    return s;
}

// Odd symmetry: solve for |r|, flip the sign afterwards.  The iterate stays
// strictly inside (-1, 1); for large |r| the true root is closer to 1 than
// one ulp and the no-progress exit returns the correctly rounded value.
double resolve_log(double step, double r) {
    if (r == 0.0) return 0.0;
    const double a = std::abs(r);
    double lo = 0.0;
    double hi = std::min(a, 1.0);
    double s = 0.5 * hi;
    for (int it = 0; it < 200; ++it) {
        const double g = s + step * std::log((1.0 + s) / (1.0 - s)) - a;
        if (std::abs(g) <= 1e-15 * (1.0 + a)) break;
        (g > 0.0 ? hi : lo) = s;
        const double gp = 1.0 + 2.0 * step / ((1.0 - s) * (1.0 + s));
        double ns = s - g / gp;
        if (!(ns > lo && ns < hi)) ns = lo + 0.5 * (hi - lo);
        if (ns == s || ns == lo || ns == hi) break;
        s = ns;
    }
    return std::copysign(s, r);
}

void require_positive_step(double step) {
    if (!(step > 0.0)) throw std::invalid_argument("regularization step must be positive");
}

}  // namespace

// ==================== graph basics ====================

bool MonotoneGraph::in_domain(double r) const {
    switch (kind) {
        case GraphKind::RegularCubic: return true;
        case GraphKind::Logarithmic: return std::abs(r) < 1.0;
        case GraphKind::DoubleObstacle: return std::abs(r) <= 1.0;
    }
    return false;
}

bool MonotoneGraph::in_domain_interior(double r) const {
    if (kind == GraphKind::RegularCubic) return true;
    return std::abs(r) < 1.0;
}

MonotoneGraph make_graph(GraphKind kind) {
    MonotoneGraph g;
    g.kind = kind;
    return g;
}

GraphKind graph_kind_from_name(const std::string& name) {
    if (name == "regular" || name == "cubic" || name == "quartic") return GraphKind::RegularCubic;
    if (name == "logarithmic" || name == "log") return GraphKind::Logarithmic;
    if (name == "double_obstacle" || name == "obstacle") return GraphKind::DoubleObstacle;
    throw ConfigError("unknown potential name: " + name);
}

std::string graph_kind_name(GraphKind kind) {
    switch (kind) {
        case GraphKind::RegularCubic: return "regular";
        case GraphKind::Logarithmic: return "logarithmic";
        case GraphKind::DoubleObstacle: return "double_obstacle";
    }
    return "unknown";
}

bool domain_compatible(GraphKind bulk, GraphKind boundary) {
    switch (bulk) {
        case GraphKind::RegularCubic: return true;  // D(beta) = R
        case GraphKind::Logarithmic: return boundary == GraphKind::Logarithmic;
        case GraphKind::DoubleObstacle: return boundary != GraphKind::RegularCubic;
    }
    return false;
}

double minimal_section(const MonotoneGraph& g, double r) {
    switch (g.kind) {
        case GraphKind::RegularCubic:
            return r * r * r;
        case GraphKind::Logarithmic: {
            if (std::abs(r) >= 1.0)
                throw PreconditionError("logarithmic graph is only defined on (-1, 1)");
            const double c = std::clamp(r, -1.0 + g.log_margin, 1.0 - g.log_margin);
            return std::log((1.0 + c) / (1.0 - c));
        }
        case GraphKind::DoubleObstacle:
            if (std::abs(r) > 1.0)
                throw PreconditionError("obstacle graph is only defined on [-1, 1]");
            return 0.0;
    }
    return 0.0;
}

double convex_primitive(const MonotoneGraph& g, double r) {
    switch (g.kind) {
        case GraphKind::RegularCubic: {
            const double r2 = r * r;
            return 0.25 * r2 * r2;
        }
        case GraphKind::Logarithmic: {
            const double a = std::abs(r);
            if (a > 1.0) return std::numeric_limits<double>::infinity();
            if (a == 1.0) return 2.0 * std::log(2.0);  // limit of the endpoint term
            return (1.0 + r) * std::log1p(r) + (1.0 - r) * std::log1p(-r);
        }
        case GraphKind::DoubleObstacle:
            return std::abs(r) <= 1.0 ? 0.0 : std::numeric_limits<double>::infinity();
    }
    return 0.0;
}

// ==================== Yosida layer ====================

double resolvent(const MonotoneGraph& g, double step, double r) {
    require_positive_step(step);
    switch (g.kind) {
        case GraphKind::RegularCubic: return resolve_cubic(step, r);
        case GraphKind::Logarithmic: return resolve_log(step, r);
        case GraphKind::DoubleObstacle: return std::clamp(r, -1.0, 1.0);
    }
    return r;
}

double yosida(const MonotoneGraph& g, double step, double r) {
    const double j = resolvent(g, step, r);
    // (r - j)/step equals beta(j); for the cubic the right-hand form is far
    // more accurate near 0 where r - j cancels, for the others it is the
    // only finite form once j rounds into the domain endpoint.
    if (g.kind == GraphKind::RegularCubic) return j * j * j;
    return (r - j) / step;
}

double yosida_derivative(const MonotoneGraph& g, double step, double r) {
    require_positive_step(step);
    switch (g.kind) {
        case GraphKind::RegularCubic: {
            const double j = resolve_cubic(step, r);
            const double bp = 3.0 * j * j;
            return bp / (1.0 + step * bp);
        }
        case GraphKind::Logarithmic: {
            const double j = resolve_log(step, r);
            const double inv_bp = 0.5 * (1.0 - j) * (1.0 + j);  // 1/beta'(j), exact at j = 1
            return 1.0 / (step + inv_bp);
        }
        case GraphKind::DoubleObstacle:
            return std::abs(r) <= 1.0 ? 0.0 : 1.0 / step;
    }
    return 0.0;
}

double moreau_envelope(const MonotoneGraph& g, double step, double r) {
    const double j = resolvent(g, step, r);
    const double d = r - j;
    return d * d / (2.0 * step) + convex_primitive(g, j);
}

// ==================== splitting and parameter checks ====================

PotentialSplit make_split(GraphKind kind, double c) {
    PotentialSplit split;
    split.graph = make_graph(kind);
    switch (kind) {
        case GraphKind::RegularCubic:
            split.pi_slope = -1.0;
            break;
        case GraphKind::Logarithmic:
            if (!(c > 1.0)) throw ConfigError("logarithmic potential requires c > 1");
            split.pi_slope = -2.0 * c;
            break;
        case GraphKind::DoubleObstacle:
            if (!(c > 0.0)) throw ConfigError("double obstacle potential requires c > 0");
            split.pi_slope = -2.0 * c;
            break;
    }
    return split;
}

CompatibilityReport check_compatibility(const MonotoneGraph& bulk,
                                        const MonotoneGraph& boundary, double eta,
                                        double C, const YosidaParams& params,
                                        std::span<const double> samples) {
    if (!(eta > 0.0)) throw std::invalid_argument("eta must be positive");
    CompatibilityReport rep;
    for (const double r : samples) {
        if (boundary.in_domain(r) && bulk.in_domain(r)) {
            const double v = std::abs(minimal_section(bulk, r)) -
                             eta * std::abs(minimal_section(boundary, r)) - C;
            rep.max_raw_violation = std::max(rep.max_raw_violation, v);
            ++rep.raw_samples_used;
        }
        const double be = yosida(bulk, params.bulk_step(), r);
        const double bge = yosida(boundary, params.boundary_step(), r);
        const double v = std::abs(be) - eta * std::abs(bge) - C;
        rep.max_yosida_violation = std::max(rep.max_yosida_violation, v);
        rep.fitted_c_eta = std::max(rep.fitted_c_eta, (0.5 / eta) * be * be - bge * be);
    }
    return rep;
}

CoercivityFit coercivity_check(const MonotoneGraph& g, double step, double m0,
                               std::span<const double> samples) {
    require_positive_step(step);
    if (!g.in_domain_interior(m0))
        throw PreconditionError("reference mean must be interior to the graph domain");
    const double dist =
        g.kind == GraphKind::RegularCubic ? 1.0 : std::min(1.0 - m0, m0 + 1.0);
    CoercivityFit fit;
    fit.delta0 = 0.5 * dist;
    for (const double r : samples) {
        const double b = yosida(g, step, r);
        fit.c0 = std::max(fit.c0, fit.delta0 * std::abs(b) - b * (r - m0));
    }
    return fit;
}

}  // namespace chstrip::potentials
