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


#include "fdbeam/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fdbeam/io.hpp"

namespace fdbeam
{
    void SolverConfig::validate() const
    {
        auto bad_sigma = [](double s) { return !(s >= 0.0) || !std::isfinite(s); };
        if (bad_sigma(sigma_tx_sq) || bad_sigma(sigma_rx_sq))
            throw std::invalid_argument("SolverConfig: coverage variances must be finite and >= 0");
        if (am_passes < 1)
            throw std::invalid_argument("SolverConfig: am_passes must be >= 1");
        if (!(subproblem_tolerance > 0.0) || !(dual_bisection_tolerance > 0.0) || dual_bisection_tolerance >= 1.0)
            throw std::invalid_argument("SolverConfig: tolerances must be positive");
        if (subproblem_max_iters < 1)
            throw std::invalid_argument("SolverConfig: subproblem_max_iters must be >= 1");
        if (!(ridge > 0.0) || !std::isfinite(ridge))
            throw std::invalid_argument("SolverConfig: ridge must be positive");
    }

    double complex_coverage_error(const CMatrix &X, const CMatrix &A)
    {
        require_dims(X.rows() == A.rows() && X.cols() == A.cols(), "coverage error: X and A shapes differ");
        const double n = static_cast<double>(A.rows());
        double acc = 0.0;
        for (Eigen::Index i = 0; i < A.cols(); ++i)
            acc += std::norm(n - A.col(i).dot(X.col(i)));
        return acc / (n * n * static_cast<double>(A.cols()));
    }

    namespace
    {
        double quadratic_objective(const CMatrix &Q, const CMatrix &X)
        {
            // sum_i x_i^H Q x_i = Re tr(X^H Q X)
            return std::max(0.0, (X.adjoint() * (Q * X)).trace().real());
        }

        // Per-column minimizer of x^H P x - 2 Re(b^H x) over |x_k| <= 1 with
        // P = Qr + lambda a a^H, b = lambda N a. Works on the disk multipliers nu >= 0:
        // x(nu) = (P + diag nu)^{-1} b, projected Newton on |x_k(nu)|^2 = 1 over a
        // working set S, which is then pruned (nu_k = 0) and grown (violated entries).
        // For small S, x(nu) comes from Z = P^{-1} (closed form) and an |S| x |S| solve:
        //   x = z - Z[:,S] (I + D Z[S,S])^{-1} D z[S],   z = Z b,  D = diag(nu[S]).
        // For large S a direct factorization of P + diag nu is better conditioned.
        class BoxColumnSolver
        {
        public:
            // qr = Q + mu I, qinv = qr^{-1}, g = qinv a, s = a^H g.
            BoxColumnSolver(const CMatrix &qr, const CMatrix &qinv, const CVector &a, const CVector &g, double s,
                            double lambda, double N)
                : qr_(qr), qinv_(qinv), a_(a), g_(g), n_(qinv.rows()), lambda_(lambda), N_(N),
                  c_(lambda / (1.0 + lambda * s)), z_(lambda * N / (1.0 + lambda * s) * g)
            {
            }

            // Returns true when the multipliers are consistent to 1e-9. nu is in/out (warm start).
            bool solve(CVector &x, RVector &nu)
            {
                if (nu.size() != n_)
                    nu = RVector::Zero(n_);
                S_.clear();
                for (Eigen::Index k = 0; k < n_; ++k)
                {
                    if (nu[k] > 0.0)
                        S_.push_back(k);
                    else
                        nu[k] = 0.0;
                }
                rebuild();
                CVector f = eval(nu);

                const int max_rounds = 2 * static_cast<int>(n_) + 8;
                bool ok = false;
                for (int round = 0; round < max_rounds; ++round)
                {
                    if (!S_.empty())
                        f = newton(nu, f);

                    std::vector<Eigen::Index> next;
                    bool changed = false;
                    for (auto k : S_)
                    {
                        if (nu[k] > 0.0 || std::norm(f[k]) - 1.0 > 1e-12)
                            next.push_back(k);
                        else
                            changed = true;
                    }
                    for (Eigen::Index k = 0; k < n_; ++k)
                        if (std::norm(f[k]) - 1.0 > 1e-12 && std::find(S_.begin(), S_.end(), k) == S_.end())
                        {
                            next.push_back(k);
                            changed = true;
                        }
                    if (!changed)
                    {
                        ok = residual(nu, f) <= 1e-9;
                        break;
                    }
                    std::sort(next.begin(), next.end());
                    S_ = std::move(next);
                    rebuild();
                    f = eval(nu);
                }

                x = f;
                for (Eigen::Index k = 0; k < n_; ++k)
                {
                    const double r = std::abs(x[k]);
                    if (!std::isfinite(r))
                        return false;
                    if (r > 1.0)
                        x[k] /= r;
                }
                return ok;
            }

        private:
            bool direct() const { return 4 * static_cast<Eigen::Index>(S_.size()) > n_; }

            void rebuild()
            {
                const Eigen::Index s = static_cast<Eigen::Index>(S_.size());
                if (direct())
                {
                    if (P_.size() == 0)
                        P_ = qr_ + lambda_ * (a_ * a_.adjoint());
                    return;
                }
                ZS_.resize(n_, s);
                for (Eigen::Index p = 0; p < s; ++p)
                    ZS_.col(p) = qinv_.col(S_[p]) - (c_ * std::conj(g_[S_[p]])) * g_;
                ZSS_.resize(s, s);
                zS_.resize(s);
                for (Eigen::Index p = 0; p < s; ++p)
                {
                    zS_[p] = z_[S_[p]];
                    for (Eigen::Index q = 0; q < s; ++q)
                        ZSS_(p, q) = ZS_(S_[p], q);
                }
            }

            CVector eval(const RVector &nu)
            {
                const Eigen::Index s = static_cast<Eigen::Index>(S_.size());
                if (s == 0)
                    return z_;
                if (direct())
                {
                    CMatrix M = P_;
                    M.diagonal() += nu.cast<cdouble>();
                    llt_.compute(M);
                    return llt_.solve((lambda_ * N_) * a_);
                }
                CVector d(s);
                for (Eigen::Index p = 0; p < s; ++p)
                    d[p] = nu[S_[p]];
                CMatrix T = d.asDiagonal() * ZSS_;
                T.diagonal().array() += 1.0;
                lu_.compute(T);
                return z_ - ZS_ * lu_.solve(d.cwiseProduct(zS_));
            }

            // (P + diag nu)^{-1} restricted to S, for the nu of the last eval.
            CMatrix inverse_on_set(const RVector &nu) const
            {
                const Eigen::Index s = static_cast<Eigen::Index>(S_.size());
                if (direct())
                {
                    CMatrix E = CMatrix::Zero(n_, s);
                    for (Eigen::Index p = 0; p < s; ++p)
                        E(S_[p], p) = 1.0;
                    const CMatrix KS = llt_.solve(E);
                    CMatrix K(s, s);
                    for (Eigen::Index p = 0; p < s; ++p)
                        K.row(p) = KS.row(S_[p]);
                    return K;
                }
                CMatrix T2 = ZSS_;
                for (Eigen::Index q = 0; q < s; ++q)
                    T2.col(q) *= nu[S_[q]];
                T2.diagonal().array() += 1.0;
                return T2.partialPivLu().solve(ZSS_);
            }

            // Bound condition in the form 1 - 1/|x_k|, which is affine in nu_k when the
            // entries decouple; |x_k|^2 - 1 makes Newton undershoot from far outside.
            static double bound_gap(cdouble x) { return 1.0 - 1.0 / std::max(std::abs(x), 1e-300); }

            // Dual function -b^H x(nu) - sum nu, concave in nu.
            double dual_value(const RVector &nu, const CVector &f) const
            {
                double v = -(lambda_ * N_) * a_.dot(f).real();
                for (auto k : S_)
                    v -= nu[k];
                return std::isfinite(v) ? v : -std::numeric_limits<double>::infinity();
            }

            // Projected residual (2-norm) of the multiplier conditions over S.
            double residual(const RVector &nu, const CVector &f) const
            {
                double r = 0.0;
                for (auto k : S_)
                {
                    const double e = bound_gap(f[k]);
                    const double v = nu[k] > 0.0 ? e : std::max(e, 0.0);
                    r += v * v;
                }
                r = std::sqrt(r);
                return std::isfinite(r) ? r : std::numeric_limits<double>::infinity();
            }

            CVector newton(RVector &nu, CVector f)
            {
                const Eigen::Index s = static_cast<Eigen::Index>(S_.size());
                double res = residual(nu, f);
                for (int it = 0; it < 50 && res > 1e-12; ++it)
                {
                    std::vector<Eigen::Index> fp; // positions in S that move
                    for (Eigen::Index p = 0; p < s; ++p)
                        if (nu[S_[p]] > 0.0 || std::norm(f[S_[p]]) > 1.0)
                            fp.push_back(p);
                    if (fp.empty())
                        break;
                    const CMatrix K = inverse_on_set(nu);
                    const Eigen::Index m = static_cast<Eigen::Index>(fp.size());
                    Eigen::MatrixXd J(m, m);
                    RVector r(m);
                    for (Eigen::Index i = 0; i < m; ++i)
                    {
                        const Eigen::Index p = fp[i];
                        // J is d|x|^2/dnu up to sign; rescale the gap to match.
                        const double mag = std::abs(f[S_[p]]);
                        r[i] = 2.0 * mag * mag * (mag - 1.0);
                        for (Eigen::Index j = 0; j < m; ++j)
                            J(i, j) = 2.0 * (std::conj(f[S_[p]]) * K(p, fp[j]) * f[S_[fp[j]]]).real();
                    }
                    J = 0.5 * (J + J.transpose());
                    J.diagonal().array() += 1e-14 * std::max(J.diagonal().maxCoeff(), 1e-300);
                    const auto ldlt = J.ldlt();
                    // Scaled step first; the plain dual Newton step is an ascent direction
                    // for the concave dual and serves as the fallback.
                    RVector grad(m);
                    for (Eigen::Index i = 0; i < m; ++i)
                        grad[i] = std::norm(f[S_[fp[i]]]) - 1.0;
                    const RVector steps[2] = {ldlt.solve(r), ldlt.solve(grad)};

                    const double d0 = dual_value(nu, f);
                    const double floor = 1e-13 * std::abs(d0);
                    bool accepted = false;
                    RVector trial;
                    CVector ft;
                    // Near the rounding floor a failed search only burns factorizations.
                    const int max_ls = res < 1e-9 ? 4 : 30;
                    for (int dir = 0; dir < 2 && !accepted; ++dir)
                    {
                        double t = 1.0;
                        for (int ls = 0; ls < (dir == 0 ? std::min(max_ls, 6) : max_ls); ++ls, t *= 0.5)
                        {
                            trial = nu;
                            for (Eigen::Index i = 0; i < m; ++i)
                                trial[S_[fp[i]]] = std::max(0.0, nu[S_[fp[i]]] + t * steps[dir][i]);
                            ft = eval(trial);
                            const double dt = dual_value(trial, ft);
                            const double rt = residual(trial, ft);
                            if (dt > d0 + floor || (dt >= d0 - floor && rt < res))
                            {
                                res = rt;
                                accepted = true;
                                break;
                            }
                        }
                    }
                    if (!accepted)
                    {
                        f = eval(nu);
                        break;
                    }
                    nu = trial;
                    f = ft;
                }
                return f;
            }

            const CMatrix &qr_;
            const CMatrix &qinv_;
            const CVector &a_;
            const CVector &g_;
            Eigen::Index n_;
            double lambda_, N_;
            double c_;
            CVector z_;
            std::vector<Eigen::Index> S_;
            CMatrix P_;
            CMatrix ZS_, ZSS_;
            CVector zS_;
            Eigen::PartialPivLU<CMatrix> lu_;
            Eigen::LLT<CMatrix> llt_;
        };

        class CoverageQp
        {
        public:
            CoverageQp(const CMatrix &Q, const CMatrix &A, double mu)
                : A_(A), n_(A.rows()), m_(A.cols()), N_(static_cast<double>(A.rows())),
                  Qr_(Q + mu * CMatrix::Identity(Q.rows(), Q.cols()))
            {
                Eigen::SelfAdjointEigenSolver<CMatrix> es(Qr_);
                const CMatrix &V = es.eigenvectors();
                const RVector inv = es.eigenvalues().cwiseMax(mu).cwiseInverse();
                Qinv_ = V * inv.cast<cdouble>().asDiagonal() * V.adjoint();
                G_ = Qinv_ * A_;
                // One step of iterative refinement; Q + mu I can be badly conditioned.
                G_ += Qinv_ * (A_ - Qr_ * G_);
                s_.resize(m_);
                gmax_.resize(m_);
                for (Eigen::Index i = 0; i < m_; ++i)
                {
                    s_[i] = A_.col(i).dot(G_.col(i)).real();
                    gmax_[i] = G_.col(i).cwiseAbs().maxCoeff();
                }
                nu_.assign(static_cast<std::size_t>(m_), RVector());
            }

            // Coverage sum of the unconstrained (closed-form) columns.
            double closed_form_coverage(double lambda) const
            {
                double c = 0.0;
                for (Eigen::Index i = 0; i < m_; ++i)
                {
                    const double den = 1.0 + lambda * s_[i];
                    c += N_ * N_ / (den * den);
                }
                return c;
            }

            // Solves every column at multiplier lambda. Returns sum_i |N - a_i^H x_i|^2.
            double evaluate(double lambda, CMatrix &X, int &active, bool &converged)
            {
                X.resize(n_, m_);
                active = 0;
                converged = true;
                double c = 0.0;
                for (Eigen::Index i = 0; i < m_; ++i)
                {
                    const double t = lambda * N_ / (1.0 + lambda * s_[i]);
                    if (t * gmax_[i] <= 1.0)
                    {
                        X.col(i) = t * G_.col(i);
                        nu_[static_cast<std::size_t>(i)].resize(0);
                    }
                    else
                    {
                        CVector x;
                        const CVector g = G_.col(i);
                        const CVector a = A_.col(i);
                        BoxColumnSolver box(Qr_, Qinv_, a, g, s_[i], lambda, N_);
                        converged &= box.solve(x, nu_[static_cast<std::size_t>(i)]);
                        X.col(i) = x;
                        for (Eigen::Index k = 0; k < n_; ++k)
                            active += std::abs(x[k]) >= 1.0 - 1e-9 ? 1 : 0;
                    }
                    c += std::norm(N_ - A_.col(i).dot(X.col(i)));
                }
                return c;
            }

            const CMatrix &ridged() const { return Qr_; }
            const std::vector<RVector> &multipliers() const { return nu_; }

            // Primal-dual Newton on the stationarity and active-bound equations, real
            // form, starting from the dual solution. The dual iteration alone is limited
            // by the conditioning of Q; this recovers |x_k| = 1 to rounding.
            void polish(double lambda, CMatrix &X, const std::vector<RVector> &nus) const
            {
                const Eigen::Index n = n_;
                for (Eigen::Index i = 0; i < m_; ++i)
                {
                    const RVector &nu0 = nus[static_cast<std::size_t>(i)];
                    if (nu0.size() != n)
                        continue;
                    std::vector<Eigen::Index> S;
                    for (Eigen::Index k = 0; k < n; ++k)
                        if (nu0[k] > 0.0)
                            S.push_back(k);
                    if (S.empty())
                        continue;
                    const Eigen::Index s = static_cast<Eigen::Index>(S.size());
                    const CVector a = A_.col(i);
                    const CMatrix P = Qr_ + lambda * (a * a.adjoint());
                    const CVector b = (lambda * N_) * a;
                    const Eigen::Index dim = 2 * n + s;
                    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(dim, dim);
                    J.topLeftCorner(n, n) = P.real();
                    J.block(0, n, n, n) = -P.imag();
                    J.block(n, 0, n, n) = P.imag();
                    J.block(n, n, n, n) = P.real();

                    CVector x = X.col(i);
                    RVector nu = nu0;
                    auto residual = [&](const CVector &xx, const RVector &vv) {
                        const CVector r1 = P * xx - b + vv.cast<cdouble>().cwiseProduct(xx);
                        RVector r(dim);
                        r.head(n) = r1.real();
                        r.segment(n, n) = r1.imag();
                        for (Eigen::Index p = 0; p < s; ++p)
                            r[2 * n + p] = std::norm(xx[S[p]]) - 1.0;
                        return r;
                    };
                    RVector r = residual(x, nu);
                    const double r0 = r.norm();
                    for (int it = 0; it < 4; ++it)
                    {
                        Eigen::MatrixXd Jt = J;
                        for (Eigen::Index k = 0; k < n; ++k)
                        {
                            Jt(k, k) += nu[k];
                            Jt(n + k, n + k) += nu[k];
                        }
                        for (Eigen::Index p = 0; p < s; ++p)
                        {
                            const Eigen::Index k = S[p];
                            Jt(k, 2 * n + p) = x[k].real();
                            Jt(n + k, 2 * n + p) = x[k].imag();
                            Jt(2 * n + p, k) = 2.0 * x[k].real();
                            Jt(2 * n + p, n + k) = 2.0 * x[k].imag();
                        }
                        const RVector d = Jt.partialPivLu().solve(-r);
                        CVector xn = x;
                        RVector nun = nu;
                        for (Eigen::Index k = 0; k < n; ++k)
                            xn[k] += cdouble(d[k], d[n + k]);
                        for (Eigen::Index p = 0; p < s; ++p)
                            nun[S[p]] += d[2 * n + p];
                        const RVector rn = residual(xn, nun);
                        if (!(rn.norm() < r.norm()))
                            break;
                        x = xn;
                        nu = nun;
                        r = rn;
                    }
                    bool valid = r.norm() < r0;
                    for (Eigen::Index k = 0; k < n && valid; ++k)
                        valid = nu[k] >= 0.0 && (nu[k] > 0.0 || std::abs(x[k]) <= 1.0 + 1e-12);
                    if (!valid)
                        continue;
                    for (Eigen::Index k = 0; k < n; ++k)
                    {
                        const double mag = std::abs(x[k]);
                        if (mag > 1.0)
                            x[k] /= mag;
                    }
                    X.col(i) = x;
                }
            }

        private:
            const CMatrix &A_;
            Eigen::Index n_, m_;
            double N_;
            CMatrix Qr_;
            CMatrix Qinv_;
            CMatrix G_;
            RVector s_, gmax_;
            std::vector<RVector> nu_;
        };

        double kkt_residual(const CMatrix &Qr, const CMatrix &A, const CMatrix &X, double lambda, double beta, double c,
                            double objective)
        {
            const double N = static_cast<double>(A.rows());
            CMatrix G = Qr * X;
            for (Eigen::Index i = 0; i < A.cols(); ++i)
            {
                const cdouble r = N - A.col(i).dot(X.col(i));
                G.col(i) -= lambda * r * A.col(i);
            }
            for (Eigen::Index i = 0; i < X.cols(); ++i)
                for (Eigen::Index k = 0; k < X.rows(); ++k)
                {
                    const double mag = std::abs(X(k, i));
                    if (mag >= 1.0 - 1e-6)
                    {
                        const cdouble u = X(k, i) / mag;
                        const double radial = (std::conj(u) * G(k, i)).real();
                        if (radial < 0.0)
                            G(k, i) -= radial * u;
                    }
                }
            return (G.norm() + lambda * std::abs(beta - c)) / (1.0 + objective);
        }

        void fill_diagnostics(SubproblemResult &r, const CMatrix &Q, const CMatrix &A, double sigma_sq)
        {
            r.objective = quadratic_objective(Q, r.solution);
            r.coverage_error = complex_coverage_error(r.solution, A);
            r.coverage_violation = std::max(0.0, r.coverage_error - sigma_sq);
            r.max_magnitude = max_entry_magnitude(r.solution);
        }
    }

    SubproblemResult solve_coverage_qp(const CMatrix &Q, const CMatrix &A, double sigma_sq, const SolverConfig &cfg,
                                       const CMatrix *incumbent)
    {
        cfg.validate();
        require_dims(Q.rows() == Q.cols(), "solve_coverage_qp: Q must be square");
        require_dims(A.rows() == Q.rows(), "solve_coverage_qp: A rows must match Q");
        require_dims(A.cols() >= 1, "solve_coverage_qp: A must have at least one column");
        if (!(sigma_sq >= 0.0) || !std::isfinite(sigma_sq))
            throw std::invalid_argument("solve_coverage_qp: sigma_sq must be finite and >= 0");

        const Eigen::Index n = A.rows(), m = A.cols();
        const double N = static_cast<double>(n);
        const double beta = sigma_sq * N * N * static_cast<double>(m);
        SubproblemResult res;

        if (sigma_sq >= 1.0)
        {
            // X = 0 meets the bound and Q is positive semidefinite.
            res.solution = CMatrix::Zero(n, m);
        }
        else if (sigma_sq == 0.0)
        {
            // Equality diag(A^H X) = N 1: least-norm point per column.
            res.solution.resize(n, m);
            for (Eigen::Index i = 0; i < m; ++i)
            {
                const double a2 = A.col(i).squaredNorm();
                const double scale = N / a2;
                res.solution.col(i) = std::abs(scale - 1.0) < 1e-12 ? CVector(A.col(i)) : CVector(scale * A.col(i));
            }
            if (max_entry_magnitude(res.solution) > 1.0 + 1e-9)
                throw infeasible_error("coverage variance 0 cannot be met with entries bounded by 1");
        }
        else
        {
            const double lmax = Q.rows() ? Eigen::SelfAdjointEigenSolver<CMatrix>(Q, Eigen::EigenvaluesOnly).eigenvalues().maxCoeff() : 0.0;
            const double mu = lmax > 0.0 ? cfg.ridge * lmax : cfg.ridge;
            CoverageQp qp(Q, A, mu);

            // Closed-form root is a lower bound: the disk constraints only raise coverage error.
            double hi = 1.0;
            while (qp.closed_form_coverage(hi) > beta && hi < 1e300)
                hi *= 16.0;
            double lo = hi;
            while (qp.closed_form_coverage(lo) <= beta && lo > 1e-300)
                lo /= 16.0;
            for (int it = 0; it < 100 && hi > lo * (1.0 + 1e-14); ++it)
            {
                const double mid = std::sqrt(lo * hi);
                (qp.closed_form_coverage(mid) > beta ? lo : hi) = mid;
            }

            CMatrix X_lo, X_hi, X;
            std::vector<RVector> nu_hi;
            int active = 0;
            bool conv = true;
            int active_hi = 0;
            double c_lo = qp.evaluate(lo, X_lo, active, conv);
            int evals = 1;
            const double band_lo = beta * (1.0 - cfg.dual_bisection_tolerance);
            if (c_lo <= beta)
            {
                hi = lo;
                X_hi = X_lo;
                nu_hi = qp.multipliers();
                active_hi = active;
            }
            else
            {
                // Bracket by secant extrapolation of log(c) against log(lambda), then
                // Illinois regula falsi inside the bracket.
                double u_lo = std::log(lo);
                double phi_lo = std::log(c_lo / beta);
                double u_prev = u_lo, phi_prev = phi_lo;
                double u = u_lo + 0.7;
                double c_hi = 0.0;
                for (;;)
                {
                    if (u > std::log(1e280))
                        throw infeasible_error("coverage variance " + format_double(sigma_sq) +
                                               " cannot be met with entries bounded by 1");
                    const double c = qp.evaluate(std::exp(u), X, active, conv);
                    ++evals;
                    const double phi = std::log(c / beta);
                    if (c <= beta)
                    {
                        hi = std::exp(u);
                        c_hi = c;
                        X_hi = X;
                        nu_hi = qp.multipliers();
                        active_hi = active;
                        break;
                    }
                    u_lo = u;
                    phi_lo = phi;
                    X_lo = X;
                    double next = u + 0.7;
                    if (phi_prev > phi)
                        next = u + std::clamp(phi * (u - u_prev) / (phi_prev - phi) * 1.1, 0.05, 6.0);
                    u_prev = u;
                    phi_prev = phi;
                    u = next;
                }
                double u_hi = std::log(hi);
                double phi_hi = c_hi > 0.0 ? std::log(c_hi / beta) : -50.0;
                int side = 0;
                while (c_hi < band_lo && evals < cfg.subproblem_max_iters && u_hi - u_lo > 1e-12)
                {
                    double u = u_hi - phi_hi * (u_hi - u_lo) / (phi_hi - phi_lo);
                    if (!(u > u_lo && u < u_hi))
                        u = 0.5 * (u_lo + u_hi);
                    const double c = qp.evaluate(std::exp(u), X, active, conv);
                    ++evals;
                    const double phi = c > 0.0 ? std::log(c / beta) : -50.0;
                    if (c > beta)
                    {
                        u_lo = u;
                        phi_lo = phi;
                        if (side == -1)
                            phi_hi *= 0.5;
                        side = -1;
                    }
                    else
                    {
                        u_hi = u;
                        phi_hi = phi;
                        c_hi = c;
                        X_hi = X;
                        nu_hi = qp.multipliers();
                        active_hi = active;
                        if (side == 1)
                            phi_lo *= 0.5;
                        side = 1;
                    }
                }
                hi = std::exp(u_hi);
                if (c_hi < band_lo && evals >= cfg.subproblem_max_iters)
                    res.converged = false;
            }
            qp.polish(hi, X_hi, nu_hi);
            res.solution = X_hi;
            res.multiplier = hi;
            res.iterations = evals;
            res.active_entries = active_hi;
            fill_diagnostics(res, Q, A, sigma_sq);
            const double c_abs = res.coverage_error * N * N * static_cast<double>(m);
            res.kkt_residual = kkt_residual(qp.ridged(), A, res.solution, hi, beta, c_abs, res.objective);
            if (res.kkt_residual > cfg.subproblem_tolerance)
                res.converged = false;
        }

        if (sigma_sq >= 1.0 || sigma_sq == 0.0)
            fill_diagnostics(res, Q, A, sigma_sq);

        if (incumbent)
        {
            require_dims(incumbent->rows() == n && incumbent->cols() == m, "solve_coverage_qp: incumbent shape differs");
            const double c_inc = complex_coverage_error(*incumbent, A);
            const bool feasible = c_inc <= sigma_sq + 1e-6 && max_entry_magnitude(*incumbent) <= 1.0 + 1e-9;
            if (feasible && quadratic_objective(Q, *incumbent) <= res.objective)
            {
                SubproblemResult kept = res;
                kept.solution = *incumbent;
                kept.kept_incumbent = true;
                fill_diagnostics(kept, Q, A, sigma_sq);
                return kept;
            }
        }
        return res;
    }

    CMatrix tx_quadratic(const CMatrix &W, const ChannelEstimate &est)
    {
        const CMatrix &H = est.estimate.entries;
        require_dims(W.rows() == H.rows(), "tx_quadratic: W rows must equal receive antenna count");
        const CMatrix HW = H.adjoint() * W; // N_t x M_rx
        CMatrix Q = HW * HW.adjoint();
        Q.diagonal().array() += est.error_variance * W.squaredNorm();
        return Q;
    }

    CMatrix rx_quadratic(const CMatrix &F, const ChannelEstimate &est)
    {
        const CMatrix &H = est.estimate.entries;
        require_dims(F.rows() == H.cols(), "rx_quadratic: F rows must equal transmit antenna count");
        const CMatrix HF = H * F; // N_r x M_tx
        CMatrix Q = HF * HF.adjoint();
        Q.diagonal().array() += est.error_variance * F.squaredNorm();
        return Q;
    }

    double expected_objective(const CMatrix &F, const CMatrix &W, const ChannelEstimate &est)
    {
        const CMatrix &H = est.estimate.entries;
        require_dims(W.rows() == H.rows() && F.rows() == H.cols(),
                     "expected_objective: F, W and the channel are not conformable");
        est.validate();
        return (W.adjoint() * H * F).squaredNorm() + est.error_variance * F.squaredNorm() * W.squaredNorm();
    }

    double subproblem_objective(const CMatrix &F, const CMatrix &W, const ChannelEstimate &est)
    {
        return expected_objective(F, W, est);
    }

    SubproblemResult solve_tx_subproblem(const CMatrix &W, const ChannelEstimate &est, const SteeringMatrix &tx_steering,
                                         double sigma_tx_sq, const SolverConfig &cfg, const CMatrix *incumbent)
    {
        est.validate();
        require_dims(tx_steering.entries.rows() == est.estimate.entries.cols(),
                     "solve_tx_subproblem: steering rows must equal transmit antenna count");
        return solve_coverage_qp(tx_quadratic(W, est), tx_steering.entries, sigma_tx_sq, cfg, incumbent);
    }

    SubproblemResult solve_rx_subproblem(const CMatrix &F, const ChannelEstimate &est, const SteeringMatrix &rx_steering,
                                         double sigma_rx_sq, const SolverConfig &cfg, const CMatrix *incumbent)
    {
        est.validate();
        require_dims(rx_steering.entries.rows() == est.estimate.entries.rows(),
                     "solve_rx_subproblem: steering rows must equal receive antenna count");
        return solve_coverage_qp(rx_quadratic(F, est), rx_steering.entries, sigma_rx_sq, cfg, incumbent);
    }

    std::vector<double> DesignResult::objective_trace() const
    {
        std::vector<double> v;
        v.reserve(trace.size());
        for (const auto &t : trace)
            v.push_back(t.objective);
        return v;
    }

    DesignResult lonestar_design(const ChannelEstimate &est, const SteeringMatrix &tx_steering,
                                 const SteeringMatrix &rx_steering, const QuantizationSpec &spec, const SolverConfig &cfg)
    {
        cfg.validate();
        spec.validate();
        est.validate();
        const CMatrix &H = est.estimate.entries;
        require_dims(tx_steering.entries.rows() == H.cols() && rx_steering.entries.rows() == H.rows(),
                     "lonestar_design: steering matrices do not match the channel dimensions");

        DesignResult r;
        CMatrix F = project_codebook(tx_steering.entries, spec);
        CMatrix W = project_codebook(rx_steering.entries, spec);
        r.trace.push_back({"init", 0, expected_objective(F, W, est)});

        for (int pass = 1; pass <= cfg.am_passes; ++pass)
        {
            r.tx_solve = solve_tx_subproblem(W, est, tx_steering, cfg.sigma_tx_sq, cfg, &F);
            r.relaxed_tx = r.tx_solve.solution;
            r.trace.push_back({"solve_tx", pass, subproblem_objective(r.relaxed_tx, W, est)});
            F = project_codebook(r.relaxed_tx, spec);
            r.trace.push_back({"project_tx", pass, expected_objective(F, W, est)});

            r.rx_solve = solve_rx_subproblem(F, est, rx_steering, cfg.sigma_rx_sq, cfg, &W);
            r.relaxed_rx = r.rx_solve.solution;
            r.trace.push_back({"solve_rx", pass, subproblem_objective(F, r.relaxed_rx, est)});
            W = project_codebook(r.relaxed_rx, spec);
            r.trace.push_back({"project_rx", pass, expected_objective(F, W, est)});

            if (!r.tx_solve.converged)
                r.warnings.push_back("pass " + std::to_string(pass) + ": transmit subproblem did not reach tolerance");
            if (!r.rx_solve.converged)
                r.warnings.push_back("pass " + std::to_string(pass) + ": receive subproblem did not reach tolerance");
        }

        r.coverage_residual_tx = r.tx_solve.coverage_violation;
        r.coverage_residual_rx = r.rx_solve.coverage_violation;
        r.tx_codebook = {F, tx_steering.region, spec};
        r.rx_codebook = {W, rx_steering.region, spec};
        r.coverage_variance_tx = coverage_variance(r.tx_codebook, tx_steering);
        r.coverage_variance_rx = coverage_variance(r.rx_codebook, rx_steering);
        if (r.coverage_variance_tx > cfg.sigma_tx_sq + 1e-6)
            r.warnings.push_back("quantized transmit codebook exceeds the coverage variance target (" +
                                 format_double(r.coverage_variance_tx) + " > " + format_double(cfg.sigma_tx_sq) + ")");
        if (r.coverage_variance_rx > cfg.sigma_rx_sq + 1e-6)
            r.warnings.push_back("quantized receive codebook exceeds the coverage variance target (" +
                                 format_double(r.coverage_variance_rx) + " > " + format_double(cfg.sigma_rx_sq) + ")");
        return r;
    }

    std::string trace_to_csv(const DesignResult &r)
    {
        std::ostringstream ss;
        ss << "pass,step,objective\n";
        for (const auto &t : r.trace)
            ss << t.pass << ',' << t.label << ',' << format_double(t.objective) << '\n';
        return ss.str();
    }
}
