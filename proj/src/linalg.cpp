#include "svarsoft/linalg.hpp"

#include <cmath>
#include <string>

#include <Eigen/Cholesky>

#include "svarsoft/error.hpp"

namespace svarsoft {

SquareMatrix draw_standard_matrix_normal(int n, RngStream& rng) {
    SquareMatrix z(n, n);
    fill_standard_matrix_normal(z, rng);
    return z;
}

void fill_standard_matrix_normal(SquareMatrix& z, RngStream& rng) {
    for (Eigen::Index i = 0; i < z.rows(); ++i)
        for (Eigen::Index j = 0; j < z.cols(); ++j) z(i, j) = rng.normal();
}

void QrWorkspace::resize(int n) {
    r_.resize(n, n);
    v_.resize(n);
    tmp_.resize(n);
}

namespace {

// Householder triangularisation of r in place, accumulating the reflections into q. On return
// r is upper triangular with nonnegative diagonal and q r equals the input.
bool householder_qr(SquareMatrix& r, SquareMatrix& q, Eigen::VectorXd& v, Eigen::VectorXd& tmp) {
    const Eigen::Index n = r.rows();
    q.setIdentity(n, n);
    for (Eigen::Index k = 0; k + 1 < n; ++k) {
        const Eigen::Index m = n - k;
        double norm2 = 0.0;
        for (Eigen::Index i = k; i < n; ++i) norm2 += r(i, k) * r(i, k);
        const double norm = std::sqrt(norm2);
        if (norm == 0.0) continue;
        const double alpha = r(k, k) > 0.0 ? -norm : norm;
        auto vk = v.head(m);
        vk = r.col(k).tail(m);
        vk(0) -= alpha;
        const double vnorm2 = vk.squaredNorm();
        if (vnorm2 == 0.0) continue;
        const double beta = 2.0 / vnorm2;
        // r <- (I - beta v v') r on the trailing block
        for (Eigen::Index j = k; j < n; ++j) {
            const double dot = beta * vk.dot(r.col(j).tail(m));
            r.col(j).tail(m) -= dot * vk;
        }
        // q <- q (I - beta v v')
        auto t = tmp.head(n);
        t.noalias() = q.rightCols(m) * vk;
        q.rightCols(m).noalias() -= (beta * t) * vk.transpose();
    }
    for (Eigen::Index k = 0; k < n; ++k) {
        if (r(k, k) < 0.0) {
            r.row(k) = -r.row(k);
            q.col(k) = -q.col(k);
        }
        if (r(k, k) < kRankTolerance) return false;
    }
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = j + 1; i < n; ++i) r(i, j) = 0.0;
    return true;
}

}  // namespace

QrResult qr_positive_diag(const SquareMatrix& z) {
    const auto n = z.rows();
    QrResult out{SquareMatrix(n, n), z};
    Eigen::VectorXd v(n), tmp(n);
    if (!householder_qr(out.r, out.q, v, tmp))
        throw Error(ErrorCode::RankDeficient, "QR: matrix is numerically rank deficient");
    return out;
}

bool QrWorkspace::orthonormal_factor(const SquareMatrix& z, SquareMatrix& q) {
    if (r_.rows() != z.rows()) resize(static_cast<int>(z.rows()));
    r_ = z;
    return householder_qr(r_, q, v_, tmp_);
}

SquareMatrix cholesky_lower(const SquareMatrix& s) {
    if (s.rows() != s.cols())
        throw Error(ErrorCode::NotPositiveDefinite, "cholesky_lower: matrix is not square");
    Eigen::LLT<SquareMatrix> llt(s);
    if (llt.info() != Eigen::Success)
        throw Error(ErrorCode::NotPositiveDefinite, "cholesky_lower: matrix is not positive definite");
    SquareMatrix l = llt.matrixL();
    for (Eigen::Index i = 0; i < l.rows(); ++i) {
        if (!(l(i, i) > 0.0) || !std::isfinite(l(i, i)))
            throw Error(ErrorCode::NotPositiveDefinite,
                        "cholesky_lower: nonpositive pivot at row " + std::to_string(i));
    }
    return l;
}

}  // namespace svarsoft
