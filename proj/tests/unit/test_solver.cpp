// SPDX-License-Identifier: Apache-2.0
//
// fdbeam: self-interference-aware analog beamforming codebooks for
// full-duplex millimeter-wave transceivers
// Copyright (C) 2026 The fdbeam authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "fdbeam/sim.hpp"

#include "reference_qcqp.hpp"
#include "test_helpers.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>

using namespace fdbeam;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace
{
    SteeringMatrix small_steering(int rows, int cols, int beams)
    {
        const auto grid = direction_grid(-45.0, 45.0, 90.0 / std::max(1, beams - 1), 0.0, 0.0, 1.0);
        return steering_matrix(UpaGeometry{rows, cols}, grid);
    }

    ChannelEstimate random_estimate(int nr, int nt, double eps, RandomStream &rng)
    {
        CMatrix H = testing::random_matrix(nr, nt, rng);
        H *= std::sqrt(double(nr * nt)) / H.norm();
        return {{H, true}, eps};
    }

    double coverage_sum(const CMatrix &X, const CMatrix &A)
    {
        double c = 0.0;
        for (Eigen::Index i = 0; i < A.cols(); ++i)
            c += std::norm(double(A.rows()) - A.col(i).dot(X.col(i)));
        return c;
    }
}

TEST_CASE("expected objective identity holds on a small instance", "[solver]")
{
    RandomStream rng(31);
    const auto est = random_estimate(4, 4, 0.1, rng);
    const CMatrix F = testing::random_matrix(4, 3, rng);
    const CMatrix W = testing::random_matrix(4, 2, rng);
    const int draws = 20000;
    double s = 0.0, s2 = 0.0;
    for (int d = 0; d < draws; ++d)
    {
        const CMatrix Hd = est.estimate.entries + testing::random_matrix(4, 4, rng, 0.1);
        const double v = (W.adjoint() * Hd * F).squaredNorm();
        s += v;
        s2 += v * v;
    }
    const double mean = s / draws;
    const double se = std::sqrt((s2 / draws - mean * mean) / draws);
    CHECK(std::abs(expected_objective(F, W, est) - mean) < 4.0 * se);
}

TEST_CASE("expected objective basics", "[solver]")
{
    RandomStream rng(32);
    auto est = random_estimate(3, 5, 0.0, rng);
    const CMatrix F = testing::random_matrix(5, 2, rng);
    const CMatrix W = testing::random_matrix(3, 4, rng);
    CHECK_THAT(expected_objective(F, W, est), WithinRel((W.adjoint() * est.estimate.entries * F).squaredNorm(), 1e-12));
    CHECK(expected_objective(CMatrix::Zero(5, 2), W, est) == 0.0);
    est.error_variance = 0.3;
    const double extra = 0.3 * F.squaredNorm() * W.squaredNorm();
    CHECK_THAT(expected_objective(F, W, est) - (W.adjoint() * est.estimate.entries * F).squaredNorm(),
               WithinRel(extra, 1e-10));
    CHECK(subproblem_objective(F, W, est) == expected_objective(F, W, est));
    CHECK_THROWS_AS(expected_objective(CMatrix::Zero(4, 2), W, est), dimension_error);
}

TEST_CASE("objective separates into per-column quadratics with matching gradients", "[solver][property]")
{
    RandomStream rng(33);
    const auto est = random_estimate(6, 5, 0.05, rng);
    const CMatrix F = testing::random_matrix(5, 3, rng);
    const CMatrix W = testing::random_matrix(6, 4, rng);
    const CMatrix Qt = tx_quadratic(W, est);
    const CMatrix Qr = rx_quadratic(F, est);
    CHECK_THAT((F.adjoint() * Qt * F).real().trace(), WithinRel(expected_objective(F, W, est), 1e-12));
    CHECK_THAT((W.adjoint() * Qr * W).real().trace(), WithinRel(expected_objective(F, W, est), 1e-12));

    // d/d(Re f_ki) = 2 Re((Q f_i)_k), d/d(Im f_ki) = 2 Im((Q f_i)_k).
    const double h = 1e-6;
    for (Eigen::Index i = 0; i < F.cols(); ++i)
        for (Eigen::Index k = 0; k < F.rows(); ++k)
        {
            const cdouble g = 2.0 * (Qt * F.col(i))[k];
            for (const cdouble dir : {cdouble(1, 0), cdouble(0, 1)})
            {
                CMatrix Fp = F, Fm = F;
                Fp(k, i) += h * dir;
                Fm(k, i) -= h * dir;
                const double fd = (expected_objective(Fp, W, est) - expected_objective(Fm, W, est)) / (2 * h);
                const double an = dir.real() != 0.0 ? g.real() : g.imag();
                CHECK_THAT(fd, WithinAbs(an, 1e-5 * (1.0 + std::abs(an))));
            }
        }
}

TEST_CASE("degenerate subproblems", "[solver]")
{
    RandomStream rng(34);
    const SteeringMatrix A = small_steering(2, 4, 4);
    SolverConfig cfg;

    // W = 0: objective identically zero.
    const auto est = random_estimate(8, 8, 0.0, rng);
    auto r = solve_tx_subproblem(CMatrix::Zero(8, 4), est, A, 1.0, cfg);
    CHECK(r.objective == 0.0);
    r = solve_tx_subproblem(CMatrix::Zero(8, 4), est, A, 0.05, cfg);
    CHECK(r.objective <= 1e-12);
    CHECK(r.coverage_error <= 0.05 + 1e-6);

    // H = 0: any feasible point is optimal, but it must still be feasible.
    const ChannelEstimate zero{{CMatrix::Zero(8, 8), false}, 0.0};
    r = solve_rx_subproblem(testing::random_phases(8, 4, rng), zero, A, 0.02, cfg);
    CHECK(r.objective <= 1e-12);
    CHECK(r.coverage_error <= 0.02 + 1e-6);
    CHECK(r.max_magnitude <= 1.0 + 1e-9);
}

TEST_CASE("zero coverage variance pins the matched filters", "[solver]")
{
    RandomStream rng(35);
    const SteeringMatrix A = small_steering(2, 4, 5);
    const auto est = random_estimate(8, 8, 0.01, rng);
    SolverConfig cfg;
    cfg.sigma_tx_sq = cfg.sigma_rx_sq = 0.0;
    const DesignResult d = lonestar_design(est, A, A, QuantizationSpec::infinite(), cfg);
    CHECK(d.tx_codebook.matrix == A.entries);
    CHECK(d.rx_codebook.matrix == A.entries);
    const double expect = (A.entries.adjoint() * est.estimate.entries * A.entries).squaredNorm() + 0.01 * 8 * 5 * 8 * 5;
    CHECK_THAT(d.final_objective(), WithinRel(expect, 1e-12));

    // Half-magnitude steering cannot reach full gain.
    const CMatrix half = 0.5 * A.entries;
    CHECK_THROWS_AS(solve_coverage_qp(tx_quadratic(A.entries, est), half, 0.0, cfg), infeasible_error);
    CHECK_THROWS_AS(solve_coverage_qp(tx_quadratic(A.entries, est), half, 0.1, cfg), infeasible_error);
}

TEST_CASE("without self-interference the design returns conjugate beams", "[solver]")
{
    const SteeringMatrix A = small_steering(2, 4, 4);
    const ChannelEstimate zero{{CMatrix::Zero(8, 8), false}, 0.0};
    SolverConfig cfg;
    cfg.sigma_tx_sq = cfg.sigma_rx_sq = 0.0;
    const auto spec = QuantizationSpec::bits(6);
    const DesignResult d = lonestar_design(zero, A, A, spec, cfg);
    CHECK(d.tx_codebook.matrix == project_codebook(A.entries, spec));
    CHECK(d.rx_codebook.matrix == project_codebook(A.entries, spec));
    CHECK(d.final_objective() == 0.0);
}

TEST_CASE("subproblems are symmetric under a Hermitian channel", "[solver]")
{
    RandomStream rng(36);
    const SteeringMatrix A = small_steering(2, 3, 4);
    SolverConfig cfg;
    for (int t = 0; t < 3; ++t)
    {
        CMatrix B = testing::random_matrix(6, 6, rng);
        CMatrix H = B + B.adjoint().eval();
        H *= 6.0 / H.norm();
        const ChannelEstimate est{{H, true}, 0.01};
        const CMatrix W0 = testing::random_phases(6, 4, rng);
        const auto tx = solve_tx_subproblem(W0, est, A, 0.05, cfg);
        const auto rx = solve_rx_subproblem(W0, est, A, 0.05, cfg);
        CHECK_THAT(rx.objective, WithinRel(tx.objective, 1e-6));
    }
}

TEST_CASE("subproblem optimum agrees with the reference solver", "[solver]")
{
    RandomStream rng(37);
    SolverConfig cfg;
    for (int t = 0; t < 4; ++t)
    {
        const int n = 8, m = 4;
        const SteeringMatrix A = small_steering(2, 4, m);
        const auto est = random_estimate(n, n, t % 2 ? 0.01 : 0.0, rng);
        const CMatrix W = testing::random_phases(n, m, rng);
        const double sigma_sq = (t < 2) ? 0.02 : 0.1;
        const CMatrix Q = tx_quadratic(W, est);
        const auto mine = solve_coverage_qp(Q, A.entries, sigma_sq, cfg);
        const auto ref = testing::ReferenceQcqp(Q, A.entries, sigma_sq * n * n * m).solve();
        CHECK(mine.converged);
        CHECK(mine.kkt_residual <= cfg.subproblem_tolerance);
        CHECK(coverage_sum(mine.solution, A.entries) <= sigma_sq * n * n * m + 1e-6 * n * n * m);
        CHECK(mine.max_magnitude <= 1.0 + 1e-9);
        CHECK_THAT(mine.objective, WithinRel(ref.objective, 5e-3));
    }
}

TEST_CASE("tight coverage with a full-rank objective converges", "[solver]")
{
    // Near-field channel plus a weak Rayleigh term: Q is full rank with a wide spectrum
    // and every entry ends on the unit circle. The column multipliers start far from the
    // solution, where a Newton step on |x|^2 - 1 makes almost no progress.
    Scenario s;
    RandomStream rng(41);
    const ChannelEstimate est{mixture_channel(s.layout, db_to_linear(-25.0), rng), 0.0};
    const auto grid = direction_grid(-60.0, 60.0, 30.0, -15.0, 15.0, 30.0);
    const SteeringMatrix A = steering_matrix(s.layout.tx_geom, grid);
    const CMatrix W = cbf_codebook(s.layout.rx_geom, s.rx_region, QuantizationSpec::bits(8)).matrix;
    const CMatrix Q = tx_quadratic(W, est);
    for (double sigma_db : {-40.0, -30.0})
    {
        const double sigma_sq = db_to_linear(sigma_db);
        const auto r = solve_coverage_qp(Q, A.entries, sigma_sq, s.solver);
        CHECK(r.converged);
        CHECK(r.kkt_residual <= s.solver.subproblem_tolerance);
        CHECK(r.max_magnitude <= 1.0 + 1e-9);
        CHECK(r.coverage_error <= sigma_sq * (1.0 + 1e-9));
    }
}

TEST_CASE("alternating minimization trace", "[solver]")
{
    RandomStream rng(38);
    const SteeringMatrix A = small_steering(2, 4, 6);
    const auto est = random_estimate(8, 8, 0.0, rng);
    SolverConfig cfg;
    cfg.am_passes = 2;
    cfg.sigma_tx_sq = cfg.sigma_rx_sq = 0.05;
    const DesignResult d = lonestar_design(est, A, A, QuantizationSpec::bits(5), cfg);
    REQUIRE(d.trace.size() == 9);
    const char *labels[] = {"init", "solve_tx", "project_tx", "solve_rx", "project_rx"};
    for (std::size_t i = 0; i < d.trace.size(); ++i)
        CHECK(d.trace[i].label == labels[i == 0 ? 0 : 1 + (i - 1) % 4]);
    for (std::size_t i = 1; i < d.trace.size(); ++i)
        if (d.trace[i].label.rfind("solve", 0) == 0)
            CHECK(d.trace[i].objective <= d.trace[i - 1].objective * (1 + 1e-9));
    CHECK(d.coverage_residual_tx <= 1e-6);
    CHECK(d.coverage_residual_rx <= 1e-6);
    CHECK(d.tx_codebook.quantized_under == QuantizationSpec::bits(5));
    CHECK(project_codebook(d.tx_codebook.matrix, QuantizationSpec::bits(5)) == d.tx_codebook.matrix);

    const std::string csv = trace_to_csv(d);
    CHECK(csv.rfind("pass,step,objective\n0,init,", 0) == 0);
}

TEST_CASE("solver configuration is validated", "[solver]")
{
    SolverConfig cfg;
    cfg.am_passes = 0;
    CHECK_THROWS(cfg.validate());
    cfg = SolverConfig{};
    cfg.subproblem_tolerance = 0.0;
    CHECK_THROWS(cfg.validate());
    CHECK_THROWS(solve_coverage_qp(CMatrix::Identity(2, 2), CMatrix::Ones(2, 1), -0.1, SolverConfig{}));
}
