#pragma once

// Reference computations used by the tests. None of them goes through the
// frequency-domain solver: covariances come from the steady-state Lyapunov
// equation and closed forms are written out directly.

#include <cmath>
#include <complex>
#include <numbers>

#include <Eigen/Dense>

#include "omcool/model.hpp"
#include "omcool/units.hpp"

namespace oracle {

using omcool::cdouble;

// Solves A S + S A^dag + Q = 0 by vectorisation.
inline Eigen::MatrixXcd lyapunov(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& Q)
{
    const auto n = A.rows();
    const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(n, n);
    Eigen::MatrixXcd K(n * n, n * n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            // vec(A S) = (I kron A) vec S, vec(S A^dag) = (conj(A) kron I) vec S
            K.block(i * n, j * n, n, n) = I(i, j) * A + std::conj(A(i, j)) * I;
        }
    }
    const Eigen::VectorXcd q = Eigen::Map<const Eigen::VectorXcd>(Q.data(), n * n);
    const Eigen::VectorXcd s = K.fullPivLu().solve(-q);
    return Eigen::Map<const Eigen::MatrixXcd>(s.data(), n, n);
}

// <(s + s^dag)^2> of the labelled mode in the steady state, i.e. 2 n_eff + 1.
inline double quadrature_variance(const omcool::DriftModel& m, const std::string& label)
{
    const Eigen::MatrixXcd B = m.noise_input.cast<cdouble>();
    const int k = *m.index_of(label);
    if (m.fidelity == omcool::Fidelity::rwa) {
        // <s s^dag> uses nbar + 1; <s^dag s> evolves with conj(A) and uses nbar.
        const Eigen::MatrixXcd Qp = B * m.correlations.cast<cdouble>().asDiagonal() * B.adjoint();
        const Eigen::MatrixXcd Qm = B * m.conjugate_correlations.cast<cdouble>().asDiagonal() * B.adjoint();
        const Eigen::MatrixXcd Sp = lyapunov(m.drift, Qp);
        const Eigen::MatrixXcd Sm = lyapunov(m.drift.conjugate(), Qm);
        return (Sp(k, k) + Sm(k, k)).real();
    }
    const Eigen::MatrixXcd Q = B * m.correlations.cast<cdouble>().asDiagonal() * B.adjoint();
    const Eigen::MatrixXcd S = lyapunov(m.drift, Q);
    const int kd = m.partner[static_cast<std::size_t>(k)];
    return (S(k, k) + S(k, kd) + S(kd, k) + S(kd, kd)).real();
}

inline double occupation(const omcool::DriftModel& m, const std::string& label)
{
    return 0.5 * quadrature_variance(m, label) - 0.5;
}

// Bose-Einstein occupation evaluated with long double, no series shortcuts.
inline double bose(double omega, double T)
{
    if (T == 0.0) return 0.0;
    const long double x = static_cast<long double>(omcool::kHbar) * omega /
                          (static_cast<long double>(omcool::kBoltzmann) * T);
    return static_cast<double>(1.0L / std::expm1(x));
}

// Peak-normalised Lorentzian of full width w.
inline double lorentzian(double x, double center, double w, double amplitude, double baseline = 0.0)
{
    const double h = 0.5 * w;
    return amplitude * h * h / ((x - center) * (x - center) + h * h) + baseline;
}

// Damping-weighted average of the two bath occupations.
inline double weighted_average(double gamma_a, double gamma_b, double lambda, double Gamma, double nbar_a,
                               double nbar_b)
{
    const double Ga = 4.0 * lambda * lambda / (gamma_b + Gamma);
    return (gamma_a * nbar_a + Ga * gamma_b / (gamma_b + Gamma) * nbar_b) / (gamma_a + Ga);
}

}  // namespace oracle
