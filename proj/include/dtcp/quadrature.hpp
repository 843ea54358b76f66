#pragma once

#include <complex>
#include <functional>

namespace dtcp::quad {

using Complex = std::complex<double>;
using Integrand = std::function<Complex(double)>;

struct QuadResult {
    Complex value{0.0, 0.0};
    double err = 0.0;       // absolute error estimate
    long evals = 0;
    bool converged = true;
};

/// 15-point Gauss-Kronrod rule on [a, b]; err from the embedded 7-point rule.
QuadResult gk15(const Integrand& f, double a, double b);

struct AdaptiveOptions {
    double rel_tol = 1e-9;
    double abs_tol = 0.0;
    int max_intervals = 512;
};

/// Globally adaptive GK15 (worst-interval-first subdivision) on [a, b].
QuadResult integrate_adaptive(const Integrand& f, double a, double b, const AdaptiveOptions& opt = {});

struct HalflineOptions {
    double rel_tol = 1e-9;          // tail convergence target, relative to accumulated value
    double abs_tol = 0.0;
    double trunc_threshold = 1e-12; // panel-mean magnitude cutoff relative to running max
    int consecutive_small = 5;      // panels below cutoff before truncating
    int max_panels = 4000;
    double max_growth = 64.0;       // cap on geometric panel width growth
    int avg_levels = 14;            // iterated-averaging depth for oscillatory tails
    long max_evals = 4'000'000;
};

/// Integrate f over [x0, +inf) (dir=+1) or (-inf, x0] (dir=-1) by expanding
/// panels, each refined adaptively. Panels grow geometrically while the
/// integrand is smooth; once successive panel integrals show a steady phase
/// advance the width locks to half an oscillation period and the partial-sum
/// sequence is extrapolated by iterated averaging, which handles
/// conditionally convergent Fourier-type tails. Truncates when the panel
/// magnitude stays below trunc_threshold times the running maximum.
QuadResult integrate_halfline(const Integrand& f, double x0, int dir, double h0, const HalflineOptions& opt = {});

/// Full-line integral centred at x0 (two half-line sweeps).
QuadResult integrate_line(const Integrand& f, double x0, double h0, const HalflineOptions& opt = {});

} // namespace dtcp::quad
