// Copyright 2026 the qoc authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace qoc {

/**
 * Matrix exponential for small dense real matrices via the (13,13) Pade
 * approximant with scaling and squaring. See Nicholas J. Higham, "The scaling
 * and squaring method for the matrix exponential revisited", SIAM J. Matrix
 * Anal. Applic., 26:1179-1193, 2005.
 *
 * The single highest-order approximant is used unconditionally: the matrices
 * here are at most 5x5, so the work saved by the lower-order variants is
 * irrelevant next to predictable full accuracy.
 *
 * Throws std::invalid_argument on non-finite input.
 */
template <typename Derived>
typename Derived::PlainObject matrix_exp(const Eigen::MatrixBase<Derived>& input)
{
    using Mat = typename Derived::PlainObject;
    using Scalar = typename Derived::Scalar;

    const Mat x = input;
    if (x.rows() != x.cols()) {
        throw std::invalid_argument("matrix_exp: matrix must be square");
    }
    if (!x.allFinite()) {
        throw std::invalid_argument("matrix_exp: non-finite input");
    }

    // Pade (13,13) numerator coefficients.
    static const Scalar b[14] = {64764752532480000., 32382376266240000., 7771770303897600.,
                                 1187353796428800.,  129060195264000.,   10559470521600.,
                                 670442572800.,      33522128640.,       1323241920.,
                                 40840800.,          960960.,            16380.,
                                 182.,               1.};
    // Largest 1-norm for which the (13,13) approximant stays at double accuracy.
    const Scalar theta13 = 5.371920351148152;

    const Scalar norm1 = x.cwiseAbs().colwise().sum().maxCoeff();
    int squarings = 0;
    if (norm1 > theta13) {
        squarings = static_cast<int>(std::ceil(std::log2(norm1 / theta13)));
    }
    const Mat a = x * std::ldexp(Scalar(1), -squarings);

    const Mat ident = Mat::Identity(x.rows(), x.cols());
    const Mat a2 = a * a;
    const Mat a4 = a2 * a2;
    const Mat a6 = a2 * a4;

    const Mat u = a * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2)
                       + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * ident);
    const Mat v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2)
                  + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * ident;

    // r13(a) = (v - u)^{-1} (v + u), then undo the scaling by repeated squaring.
    Mat result = (v - u).partialPivLu().solve(v + u);
    for (int i = 0; i < squarings; ++i) {
        result = result * result;
    }
    return result;
}

} // namespace qoc
