#pragma once

#include <Eigen/Core>

#include "svarsoft/rng.hpp"

namespace svarsoft {

/// Dense square matrix; plays the roles of Z, Q, A0 and the Cholesky factor.
using SquareMatrix = Eigen::MatrixXd;

/// Diagonal entries of R below this are treated as rank deficiency.
inline constexpr double kRankTolerance = 1e-12;

struct QrResult {
    SquareMatrix q;
    SquareMatrix r;
};

/// n x n matrix of independent standard normals, filled row by row.
SquareMatrix draw_standard_matrix_normal(int n, RngStream& rng);

/// Fills an existing n x n matrix in the same row-major order (no allocation when sized).
void fill_standard_matrix_normal(SquareMatrix& z, RngStream& rng);

/** Householder QR with the column signs of Q fixed so that diag(R) >= 0.
 *
 * This is the map Z -> Q(Z) used by every sampler: for Z with i.i.d. standard normal entries
 * Q(Z) is Haar-distributed on O(n). Throws Error(RankDeficient) when any |R_kk| < 1e-12.
 */
QrResult qr_positive_diag(const SquareMatrix& z);

/// Reusable buffers for the allocation-free QR used inside sampling loops.
class QrWorkspace {
public:
    explicit QrWorkspace(int n = 0) { resize(n); }
    void resize(int n);

    /// Computes Q(Z) into q. Returns false (leaving q unspecified) on rank deficiency.
    bool orthonormal_factor(const SquareMatrix& z, SquareMatrix& q);

private:
    SquareMatrix r_;
    Eigen::VectorXd v_;
    Eigen::VectorXd tmp_;
};

/// Lower-triangular L with L L' = S and positive diagonal. Throws Error(NotPositiveDefinite).
SquareMatrix cholesky_lower(const SquareMatrix& s);

}  // namespace svarsoft
