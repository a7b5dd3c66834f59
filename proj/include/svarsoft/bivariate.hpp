#pragma once

#include <vector>

#include "svarsoft/restrictions.hpp"
#include "svarsoft/svar.hpp"

namespace svarsoft {

/// Impact-only bivariate model: Sigma_tr = [[s11, 0], [s21, s22]] with s11, s22 > 0 and s21 < 0.
struct BivariatePhi {
    double s11 = 1.0;
    double s21 = -0.5;
    double s22 = 1.0;

    /// Throws SchemaError outside the regime s11 > 0, s21 < 0, s22 > 0.
    void validate() const;
    ReducedFormParams to_reduced_form() const;
};

struct ThetaInterval {
    double lo = 0.0;
    double hi = 0.0;
    double length() const { return hi - lo; }
};

/// Sorted, disjoint closed intervals of theta.
struct ThetaIntervalSet {
    std::vector<ThetaInterval> intervals;

    double total_length() const;
    bool contains(double theta, double slack = 0.0) const;
    double lower() const { return intervals.front().lo; }
    double upper() const { return intervals.back().hi; }
};

enum class O2Branch { Rotation, Reflection };

struct ThetaBranch {
    double theta = 0.0;
    O2Branch branch = O2Branch::Rotation;
};

/// Rotation [[c, -s], [s, c]] or reflection [[c, s], [s, -c]] with c = cos theta, s = sin theta.
SquareMatrix q_from_theta(double theta, O2Branch branch);
/// theta = atan2(Q21, Q11); the branch follows the sign of det Q.
ThetaBranch theta_of(const SquareMatrix& q);

/** Identified set under the four impact signs plus a demand-elasticity bound omega_bar.
 *
 * [atan(s22 / s21), arccot(s21 / s22 - s11 omega_bar / s22)] on the rotation branch, with
 * arccot(x) = atan(1 / x) for the negative arguments that arise here.
 */
ThetaIntervalSet connected_identified_set(const BivariatePhi& phi, double omega_bar);

/** Identified set under eta_12,0 >= lambda plus sign normalisation: up to two disjoint intervals.
 *
 * The first interval is dropped when lambda / s11 exceeds s22 / sqrt(s22^2 + s21^2). Throws
 * Error(EmptySet) when lambda > s11.
 */
ThetaIntervalSet disconnected_identified_set(const BivariatePhi& phi, double lambda);

/// Restriction sets for the two testbeds (variables p, q; shocks supply, demand).
RestrictionSet bivariate_connected_restrictions(double omega_bar,
                                                SignNormalisation mode = SignNormalisation::Soft);
RestrictionSet bivariate_disconnected_restrictions(double lambda,
                                                   SignNormalisation mode = SignNormalisation::Soft);

/** Quadrature over O(2) of the soft target's marginal in theta.
 *
 * Margins depend on Z only through Q, and Q(Z) is Haar, so the soft target induces the density
 * proportional to prod_l Lambda(m_l(Q(theta)), delta) on each branch. The rule is composite
 * Simpson with `intervals` panels per branch.
 */
struct ThetaQuadrature {
    double soft_mass = 0.0;         ///< integral of prod Lambda over both branches
    double soft_mean_theta = 0.0;   ///< E_delta[theta]
    double feasible_length = 0.0;   ///< Haar theta-measure of the hard identified set
    double feasible_mean_theta = 0.0;
    double stationary_ess = 0.0;    ///< ESS percent of importance weights under the exact target
};

ThetaQuadrature theta_quadrature(const CompiledRestrictions& restrictions, double delta,
                                 int intervals = 2'000'000);

}  // namespace svarsoft
