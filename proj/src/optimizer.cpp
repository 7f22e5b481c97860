#include "remcorr/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <optional>
#include <string>

#include "remcorr/errors.hpp"

namespace remcorr {

namespace {

// Precomputed spectral weights so that f_k(t) = sum_m w_km exp(-i lambda_m t).
class TransferEvaluator {
public:
    TransferEvaluator(const SpectralDecomposition& decomp, const SenderState& sender)
        : lambda_(decomp.eigenvalues()), w_nm1_(decomp.n()), w_n_(decomp.n()) {
        if (decomp.n() < ChainSpec::min_length) {
            throw InvalidArgument("transfer probability needs n >= 5");
        }
        const auto& v = decomp.eigenvectors();
        const Eigen::Index last = decomp.n() - 1;
        for (Eigen::Index m = 0; m < decomp.n(); ++m) {
            cplx overlap{0.0, 0.0};
            for (Eigen::Index j = 0; j < 3; ++j) {
                overlap += sender.a()[static_cast<std::size_t>(j)] * v(j, m);
            }
            w_nm1_(m) = v(last - 1, m) * overlap;
            w_n_(m) = v(last, m) * overlap;
        }
    }

    double operator()(double t) const {
        cplx f_nm1{0.0, 0.0};
        cplx f_n{0.0, 0.0};
        for (Eigen::Index m = 0; m < lambda_.size(); ++m) {
            const cplx phase = std::polar(1.0, -lambda_(m) * t);
            f_nm1 += w_nm1_(m) * phase;
            f_n += w_n_(m) * phase;
        }
        return std::norm(f_nm1) + std::norm(f_n);
    }

    // dR^2/dt = 2 Re(conj(f) df/dt) summed over both receiver sites.
    double derivative(double t) const {
        cplx f_nm1{0.0, 0.0};
        cplx f_n{0.0, 0.0};
        cplx df_nm1{0.0, 0.0};
        cplx df_n{0.0, 0.0};
        for (Eigen::Index m = 0; m < lambda_.size(); ++m) {
            const cplx phase = std::polar(1.0, -lambda_(m) * t);
            const cplx rate = cplx{0.0, -lambda_(m)} * phase;
            f_nm1 += w_nm1_(m) * phase;
            f_n += w_n_(m) * phase;
            df_nm1 += w_nm1_(m) * rate;
            df_n += w_n_(m) * rate;
        }
        return 2.0 * (std::conj(f_nm1) * df_nm1 + std::conj(f_n) * df_n).real();
    }

private:
    Eigen::VectorXd lambda_;
    Eigen::VectorXcd w_nm1_;
    Eigen::VectorXcd w_n_;
};

struct Bracket {
    double t;
    double value;
};

// Golden-section maximisation on [lo, hi].
Bracket golden_section_max(const TransferEvaluator& f, double lo, double hi, double tolerance) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = f(x1);
    double f2 = f(x2);
    while (hi - lo > tolerance) {
        if (f1 >= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    return f1 >= f2 ? Bracket{x1, f1} : Bracket{x2, f2};
}

// Bisection on the sign of dR^2/dt. Near-perfect transfer makes R^2 flat to fourth order
// at its maximum, so comparing function values alone cannot locate t0 below ~1e-4.
std::optional<Bracket> derivative_root(const TransferEvaluator& f, double lo, double hi, double tolerance) {
    if (!(f.derivative(lo) > 0.0 && f.derivative(hi) < 0.0)) {
        return std::nullopt;
    }
    while (hi - lo > tolerance) {
        const double mid = 0.5 * (lo + hi);
        const double slope = f.derivative(mid);
        if (slope > 0.0) {
            lo = mid;
        } else if (slope < 0.0) {
            hi = mid;
        } else {
            lo = hi = mid;
        }
    }
    const double t = 0.5 * (lo + hi);
    return Bracket{t, f(t)};
}

TimeOptimum optimum_for(int n, double phi, const SenderState& sender) {
    const ChainSpec spec(n, phi);
    const SpectralDecomposition decomp = spectral_decomposition(coupling_profile(spec));
    return find_first_maximum(decomp, sender);
}

// Runs `compute(i)` for i in [0, count) under OpenMP and rethrows the first failure.
template <typename T, typename Fn>
std::vector<T> parallel_collect(std::size_t count, Fn compute) {
    std::vector<std::optional<T>> slots(count);
    std::vector<std::exception_ptr> errors(count);
    const auto total = static_cast<long>(count);
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < total; ++i) {
        try {
            slots[static_cast<std::size_t>(i)].emplace(compute(static_cast<std::size_t>(i)));
        } catch (...) {
            errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
    }
    for (const auto& error : errors) {
        if (error) {
            std::rethrow_exception(error);
        }
    }
    std::vector<T> out;
    out.reserve(count);
    for (auto& slot : slots) {
        out.push_back(std::move(*slot));
    }
    return out;
}

void check_phi_grid(std::span<const double> phi_grid) {
    for (const double phi : phi_grid) {
        if (!(phi >= 0.0 && phi <= 0.5)) {
            throw InvalidArgument("phi grid value " + std::to_string(phi) + " out of range [0, 0.5]");
        }
    }
}

void check_n_grid(std::span<const int> n_grid) {
    if (n_grid.size() < 4) {
        throw InvalidArgument("scaling_exponent needs at least 4 chain lengths");
    }
    for (const int n : n_grid) {
        if (n < ChainSpec::min_length) {
            throw InvalidArgument("scaling_exponent: chain length " + std::to_string(n) + " < 5");
        }
    }
}

}  // namespace

double transfer_probability(const SpectralDecomposition& decomp, const SenderState& sender, double t) {
    return TransferEvaluator(decomp, sender)(t);
}

ScanOptions default_scan(int n) {
    return {3.0 * n, n <= 50 ? 0.05 : 0.1};
}

TimeOptimum find_first_maximum(const SpectralDecomposition& decomp, const SenderState& sender,
                               const ScanOptions& options) {
    if (!decomp.spec()) {
        throw InvalidArgument("find_first_maximum needs a decomposition built from a ChainSpec");
    }
    if (!(options.t_max > 0.0) || !(options.dt > 0.0) || !(options.tolerance > 0.0)) {
        throw InvalidArgument("find_first_maximum: t_max, dt and tolerance must be positive");
    }
    const TransferEvaluator r2(decomp, sender);
    const auto nodes = static_cast<long>(std::floor(options.t_max / options.dt + 1e-9));

    double before = r2(0.0);
    double centre = r2(options.dt);
    for (long k = 2; k <= nodes; ++k) {
        const double after = r2(static_cast<double>(k) * options.dt);
        if (centre >= before && centre > after && centre > options.floor) {
            const double coarse_t = static_cast<double>(k - 1) * options.dt;
            const double lo = coarse_t - options.dt;
            const double hi = coarse_t + options.dt;
            const auto root = derivative_root(r2, lo, hi, options.tolerance);
            Bracket best = root ? *root : golden_section_max(r2, lo, hi, options.tolerance);
            if (!root && centre > best.value) {
                best = {coarse_t, centre};
            }
            return {best.t, best.value, coarse_t, options.tolerance, *decomp.spec(), sender};
        }
        before = centre;
        centre = after;
    }
    throw NoMaximumFound("no local maximum of R^2 above " + std::to_string(options.floor) + " in [0, " +
                         std::to_string(options.t_max) + "]");
}

TimeOptimum find_first_maximum(const SpectralDecomposition& decomp, const SenderState& sender, double t_max,
                               double dt) {
    ScanOptions options{t_max, dt};
    return find_first_maximum(decomp, sender, options);
}

TimeOptimum find_first_maximum(const SpectralDecomposition& decomp, const SenderState& sender) {
    return find_first_maximum(decomp, sender, default_scan(decomp.n()));
}

std::vector<TimeOptimum> phi_sweep(int n, std::span<const double> phi_grid, const SenderState& sender) {
    check_phi_grid(phi_grid);
    static_cast<void>(ChainSpec(n, 0.0));
    return parallel_collect<TimeOptimum>(phi_grid.size(),
                                         [&](std::size_t i) { return optimum_for(n, phi_grid[i], sender); });
}

std::vector<TimeOptimum> phi_sweep_serial(int n, std::span<const double> phi_grid, const SenderState& sender) {
    check_phi_grid(phi_grid);
    std::vector<TimeOptimum> out;
    out.reserve(phi_grid.size());
    for (const double phi : phi_grid) {
        out.push_back(optimum_for(n, phi, sender));
    }
    return out;
}

double FitResult::operator()(double phi) const {
    return c - std::exp(-a * phi * std::numbers::pi - b);
}

FitResult fit_exponential(std::span<const double> phi_grid, std::span<const double> r2max_values) {
    if (phi_grid.size() != r2max_values.size()) {
        throw InvalidArgument("fit_exponential: grids differ in length");
    }
    if (phi_grid.size() < 4) {
        throw InvalidArgument("fit_exponential: need at least 4 points");
    }
    const auto m = static_cast<Eigen::Index>(phi_grid.size());
    const double pi = std::numbers::pi;

    const auto residuals = [&](const Eigen::Vector3d& p, Eigen::VectorXd& r) {
        for (Eigen::Index i = 0; i < m; ++i) {
            const double phi = phi_grid[static_cast<std::size_t>(i)];
            r(i) = p(2) - std::exp(-p(0) * phi * pi - p(1)) - r2max_values[static_cast<std::size_t>(i)];
        }
        return r.squaredNorm();
    };
    const auto jacobian = [&](const Eigen::Vector3d& p, Eigen::MatrixXd& jac) {
        for (Eigen::Index i = 0; i < m; ++i) {
            const double phi = phi_grid[static_cast<std::size_t>(i)];
            const double e = std::exp(-p(0) * phi * pi - p(1));
            jac(i, 0) = phi * pi * e;
            jac(i, 1) = e;
            jac(i, 2) = 1.0;
        }
    };

    constexpr int max_iterations = 500;
    Eigen::Vector3d p(2.0, 0.0, *std::max_element(r2max_values.begin(), r2max_values.end()) + 0.03);
    Eigen::VectorXd r(m);
    Eigen::VectorXd trial_r(m);
    Eigen::MatrixXd jac(m, 3);
    double cost = residuals(p, r);
    double damping = 1e-3;
    bool converged = false;
    int iteration = 0;

    while (iteration < max_iterations) {
        ++iteration;
        jacobian(p, jac);
        const Eigen::Vector3d gradient = jac.transpose() * r;
        if (gradient.lpNorm<Eigen::Infinity>() < 1e-15) {
            converged = true;
            break;
        }
        const Eigen::Matrix3d normal = jac.transpose() * jac;

        bool accepted = false;
        Eigen::Vector3d step = Eigen::Vector3d::Zero();
        while (damping < 1e16) {
            Eigen::Matrix3d damped = normal;
            damped.diagonal() += damping * (normal.diagonal().array() + 1e-12).matrix();
            step = damped.ldlt().solve(-gradient);
            if (step.allFinite()) {
                const double trial_cost = residuals(p + step, trial_r);
                if (std::isfinite(trial_cost) && trial_cost < cost) {
                    p += step;
                    r.swap(trial_r);
                    const double drop = cost - trial_cost;
                    cost = trial_cost;
                    damping = std::max(damping * 0.3, 1e-15);
                    accepted = true;
                    if (drop <= 1e-15 * cost) {
                        converged = true;
                    }
                    break;
                }
            }
            damping *= 10.0;
        }
        if (!accepted) {
            // No descent direction left at machine precision.
            converged = true;
            break;
        }
        if (converged || step.norm() <= 1e-12 * (p.norm() + 1e-12)) {
            converged = true;
            break;
        }
    }

    jacobian(p, jac);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(jac);
    const auto& sv = svd.singularValues();
    const bool singular = !(sv(sv.size() - 1) > 1e-8 * sv(0));

    return {p(0), p(1), p(2), std::sqrt(cost / static_cast<double>(m)), converged && !singular, iteration};
}

double limiting_curve(double phi) {
    if (!(phi >= 0.0 && phi <= 0.5)) {
        throw InvalidArgument("limiting_curve: phi out of range [0, 0.5]");
    }
    return 1.031 - std::exp(-2.232 * phi * std::numbers::pi + 0.03);
}

LimitingCoefficients limiting_coefficients(double a_inf) {
    const double decay = 1.0 - std::exp(-a_inf * std::numbers::pi / 2.0);
    return {std::log(decay), 1.0 / decay};
}

ScalingResult fit_power_law(double phi, std::vector<ScalingPoint> points) {
    const auto m = static_cast<double>(points.size());
    double sx = 0.0;
    double sy = 0.0;
    for (const auto& point : points) {
        sx += std::log(static_cast<double>(point.n));
        sy += std::log(point.t0);
    }
    const double mx = sx / m;
    const double my = sy / m;
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (const auto& point : points) {
        const double dx = std::log(static_cast<double>(point.n)) - mx;
        const double dy = std::log(point.t0) - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (!(sxx > 0.0)) {
        throw InvalidArgument("fit_power_law: chain lengths must not all coincide");
    }
    const double gamma = sxy / sxx;
    const double intercept = my - gamma * mx;
    const double ss_res = std::max(syy - gamma * sxy, 0.0);
    const double r_squared = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
    return {phi, gamma, intercept, r_squared, std::move(points)};
}

ScalingResult scaling_exponent(double phi, std::span<const int> n_grid, const SenderState& sender) {
    check_n_grid(n_grid);
    static_cast<void>(ChainSpec(ChainSpec::min_length, phi));
    auto optima = parallel_collect<TimeOptimum>(n_grid.size(),
                                                [&](std::size_t i) { return optimum_for(n_grid[i], phi, sender); });
    std::vector<ScalingPoint> points;
    for (const auto& optimum : optima) {
        points.push_back({optimum.spec.n(), optimum.t0, optimum.r2max});
    }
    return fit_power_law(phi, std::move(points));
}

ScalingResult scaling_exponent_serial(double phi, std::span<const int> n_grid, const SenderState& sender) {
    check_n_grid(n_grid);
    std::vector<ScalingPoint> points;
    for (const int n : n_grid) {
        const TimeOptimum optimum = optimum_for(n, phi, sender);
        points.push_back({n, optimum.t0, optimum.r2max});
    }
    return fit_power_law(phi, std::move(points));
}

}  // namespace remcorr
