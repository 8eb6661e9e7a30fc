// Smith normal form over a discrete valuation ring.
//
// The elimination pivots on an entry of minimal valuation in the remaining
// block (ties: lowest row, then lowest column). Every other entry of the
// pivot row and column is then an exact multiple of the pivot, so no gcd
// steps are needed and the result is exact.
#pragma once

#include <Eigen/Core>
#include <utility>

namespace qpc {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// D = U * M * V with U, V invertible and D diagonal, d_0 | d_1 | ... .
/// The inverses are tracked alongside so callers never have to invert.
template <typename Scalar>
struct SmithForm {
    MatrixX<Scalar> U, Uinv, D, V, Vinv;
    Eigen::Index rank = 0;
};

/// Ring must provide `int valuation(const Scalar&)` (nonzero argument) and
/// `Scalar unit_part(const Scalar&)` returning x / pi^{v(x)}.
template <typename Scalar, typename Ring>
SmithForm<Scalar> smith_normal_form(const MatrixX<Scalar>& M, const Ring& ring) {
    using Index = Eigen::Index;
    const Index m = M.rows(), n = M.cols();
    SmithForm<Scalar> s;
    s.D = M;
    s.U = MatrixX<Scalar>::Identity(m, m);
    s.Uinv = MatrixX<Scalar>::Identity(m, m);
    s.V = MatrixX<Scalar>::Identity(n, n);
    s.Vinv = MatrixX<Scalar>::Identity(n, n);

    const Index steps = std::min(m, n);
    for (Index t = 0; t < steps; ++t) {
        Index pi = -1, pj = -1;
        int best = 0;
        for (Index i = t; i < m; ++i)
            for (Index j = t; j < n; ++j) {
                if (s.D(i, j) == Scalar(0)) continue;
                const int v = ring.valuation(s.D(i, j));
                if (pi < 0 || v < best) {
                    pi = i;
                    pj = j;
                    best = v;
                }
            }
        if (pi < 0) break;

        if (pi != t) {
            s.D.row(t).swap(s.D.row(pi));
            s.U.row(t).swap(s.U.row(pi));
            s.Uinv.col(t).swap(s.Uinv.col(pi));
        }
        if (pj != t) {
            s.D.col(t).swap(s.D.col(pj));
            s.V.col(t).swap(s.V.col(pj));
            s.Vinv.row(t).swap(s.Vinv.row(pj));
        }

        const Scalar unit = ring.unit_part(s.D(t, t));
        if (unit != Scalar(1)) {
            const Scalar inv = Scalar(1) / unit;
            s.D.row(t) *= inv;
            s.U.row(t) *= inv;
            s.Uinv.col(t) *= unit;
        }
        const Scalar pivot = s.D(t, t);

        for (Index i = 0; i < m; ++i) {
            if (i == t || s.D(i, t) == Scalar(0)) continue;
            const Scalar c = s.D(i, t) / pivot;
            s.D.row(i) -= c * s.D.row(t);
            s.U.row(i) -= c * s.U.row(t);
            s.Uinv.col(t) += c * s.Uinv.col(i);
        }
        for (Index j = 0; j < n; ++j) {
            if (j == t || s.D(t, j) == Scalar(0)) continue;
            const Scalar c = s.D(t, j) / pivot;
            s.D.col(j) -= c * s.D.col(t);
            s.V.col(j) -= c * s.V.col(t);
            s.Vinv.row(t) += c * s.Vinv.row(j);
        }
        s.rank = t + 1;
    }
    return s;
}

}  // namespace qpc
