#pragma once

#include <Eigen/Dense>
#include <string>

#include "latscat/errors.hpp"
#include "latscat/spectral.hpp"

namespace latscat {

enum class IndexKind { Angular, Boundary };

inline const char* to_string(IndexKind k) {
    return k == IndexKind::Angular ? "angular" : "boundary";
}

/// Dense complex matrix with tagged row/column semantics.  Angular-indexed
/// operators on both sides are stored as kernels with respect to the measure
/// weights mu: applying the operator multiplies by diag(mu) first.
struct OperatorMatrix {
    Eigen::MatrixXcd mat;
    IndexKind rows = IndexKind::Angular;
    IndexKind cols = IndexKind::Angular;
    double lambda = 0.0;
    LimitSign sign = LimitSign::Plus;

    OperatorMatrix() = default;
    OperatorMatrix(Eigen::MatrixXcd m, IndexKind r, IndexKind c, double lam,
                   LimitSign s = LimitSign::Plus)
        : mat(std::move(m)), rows(r), cols(c), lambda(lam), sign(s) {}
};

/// Kind- and energy-checked composition.  Mismatched index semantics is a
/// programming error, not a data error.
inline OperatorMatrix compose(const OperatorMatrix& a, const OperatorMatrix& b) {
    if (a.cols != b.rows)
        throw std::logic_error(std::string("OperatorMatrix: composing ") + to_string(a.cols) +
                               " columns with " + to_string(b.rows) + " rows");
    if (a.mat.cols() != b.mat.rows())
        throw std::logic_error("OperatorMatrix: dimension mismatch in composition");
    return OperatorMatrix(a.mat * b.mat, a.rows, b.cols, a.lambda, a.sign);
}

} // namespace latscat
