#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "remcorr/chain_model.hpp"
#include "remcorr/correlations.hpp"
#include "remcorr/errors.hpp"
#include "remcorr/optimizer.hpp"

using namespace remcorr;

namespace {

constexpr double pi = std::numbers::pi;

SpectralDecomposition decompose(int n, double phi) {
    return spectral_decomposition(coupling_profile(ChainSpec(n, phi)));
}

// R^2 computed through the full amplitude matrix rather than the optimizer's evaluator.
double rsq_reference(const SpectralDecomposition& decomp, const SenderState& sender, double t) {
    return receiver_state(amplitudes(decomp, t), sender).rsq();
}

}  // namespace

TEST_CASE("transfer probability") {
    const auto s1 = sender_state(0, 0);
    CHECK(transfer_probability(decompose(20, 0.3), s1, 0.0) < 1e-28);
    CHECK(std::abs(transfer_probability(decompose(20, 0.5), s1, 13.69) - 1.0) < 1e-6);
    CHECK(transfer_probability(decompose(20, 0.0), s1, 22.79) == doctest::Approx(0.63).epsilon(0.01 / 0.63));

    const auto decomp = decompose(17, 0.2);
    const auto mixed = sender_state(0.35, 0.8, 0.3, 0.6);
    for (const double t : {1.0, 9.0, 30.5}) {
        CHECK(std::abs(transfer_probability(decomp, mixed, t) - rsq_reference(decomp, mixed, t)) < 1e-13);
    }
    const std::vector<double> raw{1.0, 1.0, 1.0};
    CHECK_THROWS_AS(static_cast<void>(transfer_probability(spectral_decomposition(raw), s1, 1.0)), InvalidArgument);
}

TEST_CASE("default scan") {
    CHECK(default_scan(20).dt == 0.05);
    CHECK(default_scan(50).dt == 0.05);
    CHECK(default_scan(51).dt == 0.1);
    CHECK(default_scan(200).t_max == 600.0);
}

TEST_CASE("first maximum examples") {
    const auto s1 = sender_state(0, 0);
    const auto ekert = find_first_maximum(decompose(20, 0.5), s1);
    CHECK(std::abs(ekert.t0 - pi * std::sqrt(19.0)) < 1e-4);
    CHECK(ekert.r2max >= 0.999);

    const auto p38 = find_first_maximum(decompose(20, 0.375), s1);
    CHECK(std::abs(p38.t0 - 15.27) < 0.01);
    CHECK(std::abs(p38.r2max - 0.98) < 0.01);

    const auto long_chain = find_first_maximum(decompose(200, 0.25), s1);
    CHECK(std::abs(long_chain.t0 - 69.48) < 0.1);
    CHECK(std::abs(long_chain.r2max - 0.88) < 0.01);
    CHECK(long_chain.spec.n() == 200);
    CHECK(long_chain.spec.phi() == 0.25);
}

TEST_CASE("optimum carries a local-maximum certificate") {
    for (const int n : {10, 20, 60}) {
        for (const double phi : {0.0, 0.2, 0.4, 0.5}) {
            for (const auto& sender : {sender_state(0, 0), sender_state(0.3, 0.4), sender_state(0.8, 0.1, 0.5, 0.2)}) {
                const auto decomp = decompose(n, phi);
                const auto scan = default_scan(n);
                const auto opt = find_first_maximum(decomp, sender, scan);
                CHECK(opt.t0 > 0.0);
                CHECK(opt.r2max > 0.0);
                CHECK(opt.r2max <= 1.0 + 1e-12);
                CHECK(std::abs(opt.t0 - opt.coarse_t) <= scan.dt + 1e-12);
                CHECK(opt.refine_step <= 1e-6);
                const double delta = opt.refine_step;
                CHECK(opt.r2max >= rsq_reference(decomp, sender, opt.t0 + delta) - 1e-15);
                CHECK(opt.r2max >= rsq_reference(decomp, sender, opt.t0 - delta) - 1e-15);
                CHECK(std::abs(opt.r2max - rsq_reference(decomp, sender, opt.t0)) < 1e-13);
            }
        }
    }
}

TEST_CASE("first maximum is the largest on the scan window") {
    const auto s1 = sender_state(0, 0);
    for (const int n : {20, 50}) {
        for (const double phi : {0.0, 0.125, 0.25, 0.375, 0.5}) {
            const auto decomp = decompose(n, phi);
            const auto scan = default_scan(n);
            const auto opt = find_first_maximum(decomp, s1, scan);
            double scan_max = 0.0;
            for (double t = 0.0; t <= scan.t_max; t += 0.01) {
                scan_max = std::max(scan_max, transfer_probability(decomp, s1, t));
            }
            // Later revivals may tie the first peak; they never exceed it by more than grid noise.
            CHECK(opt.r2max >= scan_max - 1e-4);
        }
    }
}

TEST_CASE("no maximum before the signal arrives") {
    const auto decomp = decompose(100, 0.0);
    CHECK_THROWS_AS(static_cast<void>(find_first_maximum(decomp, sender_state(0, 0), 5.0, 0.05)), NoMaximumFound);
    const std::vector<double> raw(9, 1.0);
    CHECK_THROWS_AS(static_cast<void>(find_first_maximum(spectral_decomposition(raw), sender_state(0, 0), 30.0, 0.05)),
                    InvalidArgument);
    CHECK_THROWS_AS(static_cast<void>(find_first_maximum(decomp, sender_state(0, 0), 30.0, -0.05)), InvalidArgument);
}

TEST_CASE("phi sweep at N = 20") {
    const std::vector<double> grid{0.0, 0.25, 0.375, 0.5};
    const auto optima = phi_sweep(20, grid, sender_state(0, 0));
    REQUIRE(optima.size() == 4);
    const std::vector<double> expected{0.63, 0.94, 0.98, 1.00};
    for (std::size_t k = 0; k < 4; ++k) {
        CHECK(std::abs(optima[k].r2max - expected[k]) < 0.01);
        CHECK(optima[k].spec.phi() == grid[k]);
    }
}

TEST_CASE("r2max grows with phi and peaks at the engineered chain") {
    std::vector<double> grid;
    for (int k = 0; k <= 8; ++k) {
        grid.push_back(k / 16.0);
    }
    for (const int n : {20, 50, 100}) {
        const auto optima = phi_sweep(n, grid, sender_state(0, 0));
        for (std::size_t k = 1; k < optima.size(); ++k) {
            CHECK(optima[k].r2max >= optima[k - 1].r2max);
            CHECK(optima.back().r2max >= optima[k - 1].r2max);
        }
        CHECK(optima.back().r2max >= 0.999);
    }
}

TEST_CASE("parallel phi sweep equals the serial reference") {
    const std::vector<double> grid{0.0, 0.1, 0.2, 0.3, 0.4, 0.5};
    const auto sender = sender_state(0.2, 0.3);
    const auto parallel = phi_sweep(40, grid, sender);
    const auto serial = phi_sweep_serial(40, grid, sender);
    REQUIRE(parallel.size() == serial.size());
    for (std::size_t k = 0; k < serial.size(); ++k) {
        CHECK(parallel[k].t0 == serial[k].t0);
        CHECK(parallel[k].r2max == serial[k].r2max);
    }
    const std::vector<double> bad{0.1, 0.6};
    CHECK_THROWS_AS(static_cast<void>(phi_sweep(20, bad, sender)), InvalidArgument);
}

TEST_CASE("fit recovers its own model") {
    std::vector<double> phis;
    std::vector<double> values;
    for (int k = 0; k <= 8; ++k) {
        const double phi = k / 16.0;
        phis.push_back(phi);
        values.push_back(1.031 - std::exp(-2.232 * phi * pi + 0.03));
    }
    const auto fit = fit_exponential(phis, values);
    CHECK(fit.converged);
    CHECK(std::abs(fit.a - 2.232) < 1e-6);
    CHECK(std::abs(fit.b + 0.03) < 1e-6);
    CHECK(std::abs(fit.c - 1.031) < 1e-6);
    CHECK(fit.residual < 1e-10);
    CHECK(fit(0.3) == doctest::Approx(1.031 - std::exp(-2.232 * 0.3 * pi + 0.03)).epsilon(1e-9));
}

TEST_CASE("fit flags degenerate data") {
    const std::vector<double> phis{0.0, 0.125, 0.25, 0.375, 0.5};
    const std::vector<double> flat(5, 0.7);
    const auto fit = fit_exponential(phis, flat);
    CHECK_FALSE(fit.converged);
    CHECK(std::isfinite(fit.residual));

    const std::vector<double> short_grid{0.0, 0.25, 0.5};
    CHECK_THROWS_AS(static_cast<void>(fit_exponential(short_grid, short_grid)), InvalidArgument);
    CHECK_THROWS_AS(static_cast<void>(fit_exponential(phis, short_grid)), InvalidArgument);
}

TEST_CASE("fit of computed optima") {
    std::vector<double> grid;
    for (int k = 0; k <= 8; ++k) {
        grid.push_back(k / 16.0);
    }
    const auto optima = phi_sweep(100, grid, sender_state(0, 0));
    std::vector<double> values;
    for (const auto& opt : optima) {
        values.push_back(opt.r2max);
    }
    const auto fit = fit_exponential(grid, values);
    CHECK(fit.converged);
    CHECK(fit.a > 2.0);
    CHECK(fit.a < 2.5);
    CHECK(fit.residual < 0.02);
}

TEST_CASE("limiting curve") {
    CHECK(limiting_curve(0.0) == doctest::Approx(1.031 - std::exp(0.03)).epsilon(1e-14));
    CHECK(std::abs(limiting_curve(0.0) - 0.0005) < 1e-4);
    CHECK(std::abs(limiting_curve(0.5) - 1.0) < 2e-3);
    // e^{-2.232 pi/4 + 0.03} = 0.1785282...
    CHECK(std::abs(limiting_curve(0.25) - 0.8524718) < 1e-7);
    CHECK_THROWS_AS(static_cast<void>(limiting_curve(0.7)), InvalidArgument);
}

TEST_CASE("limiting coefficients satisfy the boundary conditions") {
    for (const double a : {1.5, 2.232, 3.0}) {
        const auto coef = limiting_coefficients(a);
        const auto f = [&](double phi) { return coef.c - std::exp(-a * phi * pi - coef.b); };
        CHECK(std::abs(f(0.0)) < 1e-12);
        CHECK(std::abs(f(0.5) - 1.0) < 1e-12);
    }
}

TEST_CASE("power law regression") {
    std::vector<ScalingPoint> exact;
    for (const int n : {50, 100, 150, 200}) {
        exact.push_back({n, 3.0 * std::pow(n, 0.75), 1.0});
    }
    const auto fit = fit_power_law(0.2, exact);
    CHECK(std::abs(fit.gamma - 0.75) < 1e-12);
    CHECK(std::abs(fit.intercept - std::log(3.0)) < 1e-12);
    CHECK(std::abs(fit.r_squared_stat - 1.0) < 1e-12);

    double previous = 1.0;
    for (const int base : {50, 500, 5000, 50000}) {
        std::vector<ScalingPoint> ekert;
        for (int k = 1; k <= 6; ++k) {
            const int n = base * k;
            ekert.push_back({n, pi * std::sqrt(n - 1.0), 1.0});
        }
        const double gamma = fit_power_law(0.5, ekert).gamma;
        CHECK(gamma > 0.5);
        CHECK(gamma < previous);
        previous = gamma;
    }
    CHECK(std::abs(previous - 0.5) < 1e-5);

    std::vector<ScalingPoint> same(4, ScalingPoint{50, 10.0, 0.5});
    CHECK_THROWS_AS(static_cast<void>(fit_power_law(0.0, same)), InvalidArgument);
}

TEST_CASE("scaling exponent") {
    const std::vector<int> grid{20, 30, 40, 50};
    const auto sender = sender_state(0, 0);
    const auto parallel = scaling_exponent(0.5, grid, sender);
    const auto serial = scaling_exponent_serial(0.5, grid, sender);
    CHECK(parallel.gamma == serial.gamma);
    CHECK(parallel.intercept == serial.intercept);
    CHECK(std::abs(parallel.gamma - 0.5) < 0.05);
    CHECK(parallel.r_squared_stat >= 0.0);
    CHECK(parallel.r_squared_stat <= 1.0 + 1e-12);
    REQUIRE(parallel.points.size() == 4);
    for (std::size_t k = 0; k < 4; ++k) {
        CHECK(std::abs(parallel.points[k].t0 - pi * std::sqrt(grid[k] - 1.0)) < 1e-4);
    }

    const std::vector<int> too_few{20, 30, 40};
    const std::vector<int> too_short{4, 20, 30, 40};
    CHECK_THROWS_AS(static_cast<void>(scaling_exponent(0.5, too_few, sender)), InvalidArgument);
    CHECK_THROWS_AS(static_cast<void>(scaling_exponent(0.5, too_short, sender)), InvalidArgument);
}
