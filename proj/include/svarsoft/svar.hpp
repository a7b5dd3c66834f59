#pragma once

#include <vector>

#include <Eigen/Core>

#include "svarsoft/linalg.hpp"

namespace svarsoft {

/** Reduced-form parameters phi = (vec(B)', vech(Sigma_tr)')'.
 *
 * B is n x (n p + c): the lag blocks B_1 ... B_p side by side, then the constant column when
 * has_constant is set. sigma_tr is the lower Cholesky factor of the innovation covariance.
 */
struct ReducedFormParams {
    int n = 0;
    int p = 0;
    bool has_constant = false;
    Eigen::MatrixXd b;
    SquareMatrix sigma_tr;

    /// Model with no lags: only sigma_tr matters.
    static ReducedFormParams impact_only(const SquareMatrix& sigma_tr);

    int regressors() const { return n * p + (has_constant ? 1 : 0); }
    /// The n x n block B_l, l = 1..p.
    Eigen::Block<const Eigen::MatrixXd> lag(int l) const { return b.block(0, (l - 1) * n, n, n); }

    /// Throws SchemaError if dimensions disagree or diag(sigma_tr) is not positive.
    void validate() const;
};

/// Rows c_ih' of C_h Sigma_tr for h = 0..H; c_i0 is row i of Sigma_tr.
class IrfCoefficients {
public:
    IrfCoefficients() = default;
    IrfCoefficients(std::vector<Eigen::MatrixXd> c_sigma) : c_sigma_(std::move(c_sigma)) {}

    int horizons() const { return static_cast<int>(c_sigma_.size()) - 1; }
    int n() const { return c_sigma_.empty() ? 0 : static_cast<int>(c_sigma_.front().rows()); }

    /// C_h Sigma_tr.
    const Eigen::MatrixXd& at(int h) const { return c_sigma_.at(static_cast<std::size_t>(h)); }
    /// c_ih as a column vector (cumulative sum over l <= h when requested).
    Eigen::VectorXd row(int i, int h, bool cumulative = false) const;

private:
    std::vector<Eigen::MatrixXd> c_sigma_;
};

/// u_t = y_t - B x_t over the usable sample; row t of the matrix is u_t'.
struct InnovationSeries {
    Eigen::MatrixXd u;
    int length() const { return static_cast<int>(u.rows()); }
};

/// Regressor layout shared by estimation and innovation recomputation.
struct VarData {
    Eigen::MatrixXd y;  ///< (T - p) x n left-hand side
    Eigen::MatrixXd x;  ///< (T - p) x (n p + c) regressors, lags first then the constant
    int p = 0;
    bool has_constant = false;

    static VarData build(const Eigen::MatrixXd& levels, int p, bool has_constant);
};

/// Sufficient statistics for the diffuse normal-inverse-Wishart posterior.
struct OlsSuffStats {
    Eigen::MatrixXd xtx;     ///< X'X
    Eigen::MatrixXd b_hat;   ///< OLS B, n x k
    Eigen::MatrixXd scatter; ///< residual cross product U'U
    int t_eff = 0;           ///< usable observations T - p
    int n = 0;
    int p = 0;
    bool has_constant = false;
};

struct OlsEstimate {
    ReducedFormParams ols;
    OlsSuffStats stats;
    InnovationSeries innovations;
};

IrfCoefficients compute_irf_coefficients(const ReducedFormParams& phi, int horizons);

/// eta_ijh = c_ih' q_j (or the cumulative response up to h).
double impulse_response(const IrfCoefficients& irf, const SquareMatrix& q, int i, int j, int h,
                        bool cumulative = false);

/// Entry (j, i) of A0 = Q' Sigma_tr^{-1}.
double structural_coefficient(const ReducedFormParams& phi, const SquareMatrix& q, int j, int i);

/// Q' Sigma_tr^{-1} u.
Eigen::VectorXd structural_shock(const ReducedFormParams& phi, const SquareMatrix& q,
                                 const Eigen::VectorXd& u);

/// Contribution of shock j to the unexpected change in variable i between k and k + h.
double historical_decomposition(const ReducedFormParams& phi, const SquareMatrix& q,
                                const IrfCoefficients& irf, const InnovationSeries& u, int i,
                                int j, int k, int h);

/// Column i of Sigma_tr^{-1}, by forward substitution.
Eigen::VectorXd inverse_sigma_column(const ReducedFormParams& phi, int i);

/// Sigma_tr^{-1} u for each row of u (rows in, rows out).
Eigen::MatrixXd whiten(const ReducedFormParams& phi, const Eigen::MatrixXd& u_rows);

InnovationSeries compute_innovations(const ReducedFormParams& phi, const VarData& data);

/// OLS on a T x n matrix of levels. Throws InsufficientData when T - p <= n p + n + 1.
OlsEstimate estimate_reduced_form(const Eigen::MatrixXd& y, int p, bool has_constant);

}  // namespace svarsoft
