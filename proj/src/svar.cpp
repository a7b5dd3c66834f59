#include "svarsoft/svar.hpp"

#include <cmath>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include "svarsoft/error.hpp"

namespace svarsoft {

ReducedFormParams ReducedFormParams::impact_only(const SquareMatrix& sigma_tr) {
    ReducedFormParams phi;
    phi.n = static_cast<int>(sigma_tr.rows());
    phi.p = 0;
    phi.has_constant = false;
    phi.b.resize(phi.n, 0);
    phi.sigma_tr = sigma_tr;
    return phi;
}

void ReducedFormParams::validate() const {
    if (n < 1 || p < 0) throw Error(ErrorCode::SchemaError, "reduced form: bad dimensions");
    if (b.rows() != n || b.cols() != regressors())
        throw Error(ErrorCode::SchemaError, "reduced form: B must be n x (n p + intercept)");
    if (sigma_tr.rows() != n || sigma_tr.cols() != n)
        throw Error(ErrorCode::SchemaError, "reduced form: Sigma_tr must be n x n");
    for (int i = 0; i < n; ++i) {
        if (!(sigma_tr(i, i) > 0.0))
            throw Error(ErrorCode::SchemaError, "reduced form: diag(Sigma_tr) must be positive");
        for (int j = i + 1; j < n; ++j)
            if (sigma_tr(i, j) != 0.0)
                throw Error(ErrorCode::SchemaError, "reduced form: Sigma_tr must be lower triangular");
    }
}

Eigen::VectorXd IrfCoefficients::row(int i, int h, bool cumulative) const {
    if (!cumulative) return at(h).row(i).transpose();
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(n());
    for (int l = 0; l <= h; ++l) sum += at(l).row(i).transpose();
    return sum;
}

IrfCoefficients compute_irf_coefficients(const ReducedFormParams& phi, int horizons) {
    if (horizons < 0) throw Error(ErrorCode::SchemaError, "horizon must be nonnegative");
    const int n = phi.n;
    std::vector<Eigen::MatrixXd> c(static_cast<std::size_t>(horizons) + 1);
    c[0] = Eigen::MatrixXd::Identity(n, n);
    for (int h = 1; h <= horizons; ++h) {
        c[h] = Eigen::MatrixXd::Zero(n, n);
        for (int l = 1; l <= std::min(h, phi.p); ++l) c[h].noalias() += phi.lag(l) * c[h - l];
    }
    for (auto& ch : c) ch = ch * phi.sigma_tr;
    return IrfCoefficients(std::move(c));
}

double impulse_response(const IrfCoefficients& irf, const SquareMatrix& q, int i, int j, int h,
                        bool cumulative) {
    if (!cumulative) return irf.at(h).row(i).dot(q.col(j));
    double sum = 0.0;
    for (int l = 0; l <= h; ++l) sum += irf.at(l).row(i).dot(q.col(j));
    return sum;
}

Eigen::VectorXd inverse_sigma_column(const ReducedFormParams& phi, int i) {
    Eigen::VectorXd e = Eigen::VectorXd::Unit(phi.n, i);
    phi.sigma_tr.triangularView<Eigen::Lower>().solveInPlace(e);
    return e;
}

Eigen::MatrixXd whiten(const ReducedFormParams& phi, const Eigen::MatrixXd& u_rows) {
    Eigen::MatrixXd w = u_rows.transpose();
    phi.sigma_tr.triangularView<Eigen::Lower>().solveInPlace(w);
    return w.transpose();
}

double structural_coefficient(const ReducedFormParams& phi, const SquareMatrix& q, int j, int i) {
    return inverse_sigma_column(phi, i).dot(q.col(j));
}

Eigen::VectorXd structural_shock(const ReducedFormParams& phi, const SquareMatrix& q,
                                 const Eigen::VectorXd& u) {
    Eigen::VectorXd v = u;
    phi.sigma_tr.triangularView<Eigen::Lower>().solveInPlace(v);
    return q.transpose() * v;
}

double historical_decomposition(const ReducedFormParams& phi, const SquareMatrix& q,
                                const IrfCoefficients& irf, const InnovationSeries& u, int i,
                                int j, int k, int h) {
    if (k < 0 || h < 0 || k + h >= u.length())
        throw Error(ErrorCode::OutOfSample, "historical decomposition: episode outside the sample");
    if (h > irf.horizons())
        throw Error(ErrorCode::OutOfSample, "historical decomposition: span exceeds IRF horizon");
    const auto qj = q.col(j);
    double total = 0.0;
    for (int l = 0; l <= h; ++l) {
        Eigen::VectorXd v = u.u.row(k + h - l).transpose();
        phi.sigma_tr.triangularView<Eigen::Lower>().solveInPlace(v);
        total += irf.at(l).row(i).dot(qj) * qj.dot(v);
    }
    return total;
}

VarData VarData::build(const Eigen::MatrixXd& levels, int p, bool has_constant) {
    const int t_total = static_cast<int>(levels.rows());
    const int n = static_cast<int>(levels.cols());
    const int t_eff = t_total - p;
    if (t_eff <= 0) throw Error(ErrorCode::InsufficientData, "fewer observations than lags");
    VarData d;
    d.p = p;
    d.has_constant = has_constant;
    const int k = n * p + (has_constant ? 1 : 0);
    d.y = levels.bottomRows(t_eff);
    d.x.resize(t_eff, k);
    for (int t = 0; t < t_eff; ++t) {
        for (int l = 1; l <= p; ++l) d.x.block(t, (l - 1) * n, 1, n) = levels.row(p + t - l);
        if (has_constant) d.x(t, k - 1) = 1.0;
    }
    return d;
}

InnovationSeries compute_innovations(const ReducedFormParams& phi, const VarData& data) {
    InnovationSeries s;
    s.u = data.y;
    if (phi.regressors() > 0) s.u.noalias() -= data.x * phi.b.transpose();
    return s;
}

OlsEstimate estimate_reduced_form(const Eigen::MatrixXd& y, int p, bool has_constant) {
    const int n = static_cast<int>(y.cols());
    const int t_eff = static_cast<int>(y.rows()) - p;
    if (n < 1 || p < 0) throw Error(ErrorCode::SchemaError, "estimate: bad dimensions");
    if (t_eff <= n * p + n + 1)
        throw Error(ErrorCode::InsufficientData,
                    "estimate: need more than " + std::to_string(n * p + n + 1) +
                        " usable observations, have " + std::to_string(t_eff));
    const VarData data = VarData::build(y, p, has_constant);
    const int k = static_cast<int>(data.x.cols());

    OlsEstimate est;
    est.stats.n = n;
    est.stats.p = p;
    est.stats.has_constant = has_constant;
    est.stats.t_eff = t_eff;
    est.stats.xtx = data.x.transpose() * data.x;
    if (k > 0) {
        Eigen::LDLT<Eigen::MatrixXd> ldlt(est.stats.xtx);
        if (ldlt.info() != Eigen::Success || ldlt.rcond() < 1e-14)
            throw Error(ErrorCode::InsufficientData, "estimate: regressors are collinear");
        est.stats.b_hat = ldlt.solve(data.x.transpose() * data.y).transpose();
    } else {
        est.stats.b_hat.resize(n, 0);
    }

    est.ols.n = n;
    est.ols.p = p;
    est.ols.has_constant = has_constant;
    est.ols.b = est.stats.b_hat;
    est.innovations = compute_innovations(est.ols, data);
    est.stats.scatter = est.innovations.u.transpose() * est.innovations.u;
    const Eigen::MatrixXd sigma = est.stats.scatter / static_cast<double>(t_eff - k);
    est.ols.sigma_tr = cholesky_lower(sigma);
    return est;
}

}  // namespace svarsoft
