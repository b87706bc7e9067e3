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

#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "qoc/matrix_exp.hpp"
#include "qoc/sampling.hpp"

using qoc::matrix_exp;

TEST_CASE("exponential of the zero matrix is the identity")
{
    const Eigen::Matrix3d e = matrix_exp(Eigen::Matrix3d(Eigen::Matrix3d::Zero()));
    REQUIRE((e - Eigen::Matrix3d::Identity()).norm() <= 1e-15);
}

TEST_CASE("diagonal matrices exponentiate entrywise")
{
    Eigen::Matrix3d a = Eigen::Vector3d(-0.3, 0.0, 2.5).asDiagonal();
    const Eigen::Matrix3d e = matrix_exp(a);
    REQUIRE(e(0, 0) == Catch::Approx(std::exp(-0.3)).epsilon(1e-14));
    REQUIRE(e(1, 1) == Catch::Approx(1.0).epsilon(1e-14));
    REQUIRE(e(2, 2) == Catch::Approx(std::exp(2.5)).epsilon(1e-14));
    REQUIRE(std::abs(e(0, 1)) + std::abs(e(1, 2)) + std::abs(e(2, 0)) < 1e-15);
}

TEST_CASE("nilpotent exponential terminates exactly")
{
    Eigen::Matrix3d a = Eigen::Matrix3d::Zero();
    a(0, 1) = 2.0;
    a(1, 2) = -3.0;
    // e^A = I + A + A^2/2 exactly for A^3 = 0.
    const Eigen::Matrix3d expected =
        Eigen::Matrix3d::Identity() + a + 0.5 * Eigen::Matrix3d(a * a);
    REQUIRE((matrix_exp(a) - expected).norm() < 1e-14);
}

TEST_CASE("rotation generator gives the closed-form rotation matrix")
{
    const double angle = 1.234;
    Eigen::Matrix3d a = Eigen::Matrix3d::Zero();
    a(0, 1) = -angle;
    a(1, 0) = angle;
    const Eigen::Matrix3d e = matrix_exp(a);
    REQUIRE(e(0, 0) == Catch::Approx(std::cos(angle)).epsilon(1e-13));
    REQUIRE(e(0, 1) == Catch::Approx(-std::sin(angle)).epsilon(1e-13));
    REQUIRE(e(1, 0) == Catch::Approx(std::sin(angle)).epsilon(1e-13));
    REQUIRE(e(2, 2) == Catch::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("agrees with an independent Taylor-series evaluation")
{
    qoc::SplitMix64 rng(20260501);
    for (int trial = 0; trial < 200; ++trial) {
        const double scale = std::pow(10.0, oracles::uniform(rng, -2.0, 1.3));
        Eigen::Matrix4d a;
        for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 4; ++j) {
                a(i, j) = scale * oracles::uniform(rng, -1.0, 1.0);
            }
        }
        const Eigen::Matrix4d pade = matrix_exp(a);
        const Eigen::Matrix4d series = oracles::series_exp(a);
        REQUIRE((pade - series).norm() <= 1e-12 * std::max(1.0, series.norm()));
    }
}

TEST_CASE("inverse identity e^A e^{-A} = I")
{
    qoc::SplitMix64 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        Eigen::Matrix3d a;
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                a(i, j) = oracles::uniform(rng, -2.0, 2.0);
            }
        }
        const Eigen::Matrix3d prod = matrix_exp(a) * matrix_exp(Eigen::Matrix3d(-a));
        REQUIRE((prod - Eigen::Matrix3d::Identity()).norm() < 1e-12);
    }
}

TEST_CASE("semigroup property e^{2A} = (e^A)^2 under heavy scaling")
{
    Eigen::Matrix3d a;
    a << 40.0, 7.0, -3.0, 0.5, -25.0, 1.0, 2.0, -1.0, 10.0;
    const Eigen::Matrix3d twice = matrix_exp(Eigen::Matrix3d(2.0 * a));
    const Eigen::Matrix3d squared = matrix_exp(a) * matrix_exp(a);
    REQUIRE((twice - squared).norm() <= 1e-10 * twice.norm());
}

TEST_CASE("rejects non-finite input")
{
    Eigen::Matrix3d a = Eigen::Matrix3d::Zero();
    a(1, 1) = std::numeric_limits<double>::quiet_NaN();
    REQUIRE_THROWS_AS(matrix_exp(a), std::invalid_argument);
}

TEST_CASE("rejects non-square input")
{
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(3, 4);
    REQUIRE_THROWS_AS(matrix_exp(a), std::invalid_argument);
}
