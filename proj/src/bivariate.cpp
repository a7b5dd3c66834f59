#include "svarsoft/bivariate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "svarsoft/error.hpp"
#include "svarsoft/soft_target.hpp"

namespace svarsoft {

void BivariatePhi::validate() const {
    if (!(s11 > 0.0 && s22 > 0.0 && s21 < 0.0))
        throw Error(ErrorCode::SchemaError, "bivariate phi requires s11 > 0, s21 < 0, s22 > 0");
}

ReducedFormParams BivariatePhi::to_reduced_form() const {
    SquareMatrix sigma(2, 2);
    sigma << s11, 0.0, s21, s22;
    return ReducedFormParams::impact_only(sigma);
}

double ThetaIntervalSet::total_length() const {
    double total = 0.0;
    for (const auto& i : intervals) total += i.length();
    return total;
}

bool ThetaIntervalSet::contains(double theta, double slack) const {
    return std::any_of(intervals.begin(), intervals.end(), [&](const ThetaInterval& i) {
        return theta >= i.lo - slack && theta <= i.hi + slack;
    });
}

SquareMatrix q_from_theta(double theta, O2Branch branch) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    SquareMatrix q(2, 2);
    if (branch == O2Branch::Rotation)
        q << c, -s, s, c;
    else
        q << c, s, s, -c;
    return q;
}

ThetaBranch theta_of(const SquareMatrix& q) {
    const double det = q(0, 0) * q(1, 1) - q(0, 1) * q(1, 0);
    return {std::atan2(q(1, 0), q(0, 0)), det >= 0.0 ? O2Branch::Rotation : O2Branch::Reflection};
}

ThetaIntervalSet connected_identified_set(const BivariatePhi& phi, double omega_bar) {
    phi.validate();
    if (!(omega_bar >= 0.0)) throw Error(ErrorCode::ConfigError, "omega_bar must be nonnegative");
    const double lower = std::atan(phi.s22 / phi.s21);
    const double x = phi.s21 / phi.s22 - phi.s11 * omega_bar / phi.s22;
    const double upper = std::atan(1.0 / x);
    return ThetaIntervalSet{{{lower, upper}}};
}

ThetaIntervalSet disconnected_identified_set(const BivariatePhi& phi, double lambda) {
    phi.validate();
    if (lambda < 0.0) throw Error(ErrorCode::ConfigError, "lambda must be nonnegative");
    if (lambda > phi.s11)
        throw Error(ErrorCode::EmptySet, "lambda exceeds s11: the identified set is empty");
    const double r = lambda / phi.s11;
    const double base = std::atan(phi.s22 / phi.s21);
    ThetaIntervalSet set;
    if (r <= phi.s22 / std::hypot(phi.s22, phi.s21)) set.intervals.push_back({base, std::asin(-r)});
    set.intervals.push_back(
        {std::numbers::pi / 2.0, std::min(std::numbers::pi - std::asin(r), std::numbers::pi + base)});
    return set;
}

namespace {

Restriction impact_sign(int variable, int shock, int sign, const std::string& label) {
    Restriction r;
    r.kind = RestrictionKind::IrfSign;
    r.variable = variable;
    r.shock = shock;
    r.sign = sign;
    r.label = label;
    return r;
}

RestrictionSet bivariate_base() {
    RestrictionSet set;
    set.variables = {"p", "q"};
    set.shocks = {"supply", "demand"};
    return set;
}

}  // namespace

RestrictionSet bivariate_connected_restrictions(double omega_bar, SignNormalisation mode) {
    auto set = bivariate_base();
    set.restrictions.push_back(impact_sign(0, 0, +1, "p on supply >= 0"));
    set.restrictions.push_back(impact_sign(1, 0, -1, "q on supply <= 0"));
    set.restrictions.push_back(impact_sign(0, 1, +1, "p on demand >= 0"));
    set.restrictions.push_back(impact_sign(1, 1, +1, "q on demand >= 0"));
    Restriction e;
    e.kind = RestrictionKind::ElasticityBound;
    e.variable = 1;
    e.denominator = 0;
    e.denominator_sign = +1;
    e.shock = 1;
    e.sign = -1;
    e.bound = omega_bar;
    e.label = "q/p on demand <= omega_bar";
    set.restrictions.push_back(e);
    return set.with_normalisation(mode);
}

RestrictionSet bivariate_disconnected_restrictions(double lambda, SignNormalisation mode) {
    auto set = bivariate_base();
    auto r = impact_sign(0, 1, +1, "p on demand >= lambda");
    r.bound = lambda;
    set.restrictions.push_back(r);
    return set.with_normalisation(mode);
}

ThetaQuadrature theta_quadrature(const CompiledRestrictions& restrictions, double delta, int intervals) {
    if (restrictions.n() != 2) throw Error(ErrorCode::SchemaError, "theta quadrature needs n = 2");
    if (intervals % 2 != 0) ++intervals;
    const double a = -std::numbers::pi;
    const double h = 2.0 * std::numbers::pi / intervals;
    Eigen::VectorXd m(restrictions.size());

    double soft = 0.0, soft_theta = 0.0, feasible = 0.0, feasible_theta = 0.0, inverse = 0.0;
    for (O2Branch branch : {O2Branch::Rotation, O2Branch::Reflection}) {
        for (int k = 0; k <= intervals; ++k) {
            const double theta = a + k * h;
            const double simpson = (k == 0 || k == intervals) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
            SquareMatrix q = q_from_theta(theta, branch);
            if (restrictions.mechanical_normalisation()) restrictions.normalise(q);
            restrictions.evaluate(q, m);
            double log_g = 0.0;
            for (Eigen::Index l = 0; l < m.size(); ++l) log_g += log_logistic(m[l], delta);
            const double g = std::exp(log_g);
            soft += simpson * g;
            soft_theta += simpson * g * theta;
            if (m.size() == 0 || m.minCoeff() >= 0.0) {
                feasible += simpson;
                feasible_theta += simpson * theta;
                inverse += simpson / g;
            }
        }
    }
    const double scale = h / 3.0;
    ThetaQuadrature out;
    out.soft_mass = soft * scale;
    out.soft_mean_theta = soft_theta / soft;
    out.feasible_length = feasible * scale;
    out.feasible_mean_theta = feasible > 0.0 ? feasible_theta / feasible : 0.0;
    // ESS = (E_g w)^2 / E_g w^2 with w = 1{feasible} / g under the normalised soft density.
    out.stationary_ess = feasible > 0.0 ? 100.0 * feasible * feasible / (soft * inverse) : 0.0;
    return out;
}

}  // namespace svarsoft
