#pragma once

#include <span>
#include <vector>

#include "remcorr/chain_model.hpp"
#include "remcorr/correlations.hpp"

namespace remcorr {

/// R^2(t) = |f_N(t)|^2 + |f_{N-1}(t)|^2.
[[nodiscard]] double transfer_probability(const SpectralDecomposition& decomp, const SenderState& sender, double t);

struct ScanOptions {
    double t_max;
    double dt;
    double floor = 0.01;         // ignore maxima of R^2 at or below this value
    double tolerance = 1e-9;     // refinement bracket width
};

/// dt = 0.05 for N <= 50, 0.1 above; t_max = 3N.
[[nodiscard]] ScanOptions default_scan(int n);

struct TimeOptimum {
    double t0;
    double r2max;
    double coarse_t;     // grid node the refinement started from
    double refine_step;  // final refinement bracket width
    ChainSpec spec;
    SenderState sender;
};

/// First interior local maximum of R^2(t) on {0, dt, ..., t_max} above the floor,
/// refined inside [t_k - dt, t_k + dt] by bisection on the sign of dR^2/dt (golden-section
/// search on R^2 when the slope does not change sign there). Throws NoMaximumFound if none exists.
[[nodiscard]] TimeOptimum find_first_maximum(const SpectralDecomposition& decomp, const SenderState& sender,
                                             const ScanOptions& options);
[[nodiscard]] TimeOptimum find_first_maximum(const SpectralDecomposition& decomp, const SenderState& sender,
                                             double t_max, double dt);
/// Uses default_scan(decomp.n()).
[[nodiscard]] TimeOptimum find_first_maximum(const SpectralDecomposition& decomp, const SenderState& sender);

/// One TimeOptimum per phi; OpenMP over grid points.
[[nodiscard]] std::vector<TimeOptimum> phi_sweep(int n, std::span<const double> phi_grid, const SenderState& sender);
/// Reference implementation of phi_sweep.
[[nodiscard]] std::vector<TimeOptimum> phi_sweep_serial(int n, std::span<const double> phi_grid,
                                                        const SenderState& sender);

/// F(phi) = c - exp(-a phi pi - b)
struct FitResult {
    double a;
    double b;
    double c;
    double residual;  // root-mean-square error on the training grid
    bool converged;
    int iterations;

    [[nodiscard]] double operator()(double phi) const;
};

/// Levenberg-Marquardt least squares for F(phi). Starts from c = max(data) + 0.03, a = 2, b = 0;
/// at most 500 iterations. A fit whose normal matrix is singular at the optimum is reported
/// as unconverged (best-so-far coefficients are still returned).
[[nodiscard]] FitResult fit_exponential(std::span<const double> phi_grid, std::span<const double> r2max_values);

/// R_inf(phi) = 1.031 - exp(-2.232 phi pi + 0.03)
[[nodiscard]] double limiting_curve(double phi);

struct LimitingCoefficients {
    double b;
    double c;
};

/// b and c such that c - exp(-a phi pi - b) is 0 at phi = 0 and 1 at phi = 1/2.
[[nodiscard]] LimitingCoefficients limiting_coefficients(double a_inf);

struct ScalingPoint {
    int n;
    double t0;
    double r2max;
};

struct ScalingResult {
    double phi;
    double gamma;           // slope of log t0 against log N
    double intercept;
    double r_squared_stat;  // coefficient of determination of the regression
    std::vector<ScalingPoint> points;
};

/// Ordinary least squares of log t0 = gamma log N + intercept. Needs >= 4 lengths, all >= 5.
[[nodiscard]] ScalingResult scaling_exponent(double phi, std::span<const int> n_grid, const SenderState& sender);
[[nodiscard]] ScalingResult scaling_exponent_serial(double phi, std::span<const int> n_grid,
                                                    const SenderState& sender);

/// Regression alone, exposed for checking against analytic t0(N).
[[nodiscard]] ScalingResult fit_power_law(double phi, std::vector<ScalingPoint> points);

}  // namespace remcorr
