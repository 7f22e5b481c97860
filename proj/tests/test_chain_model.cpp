#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <boost/multiprecision/cpp_dec_float.hpp>

#include "oracle/full_space.hpp"
#include "remcorr/chain_model.hpp"
#include "remcorr/errors.hpp"

using namespace remcorr;

namespace {

constexpr double pi = std::numbers::pi;

double max_abs(const Eigen::MatrixXcd& m) {
    return m.cwiseAbs().maxCoeff();
}

SpectralDecomposition decompose(int n, double phi) {
    return spectral_decomposition(coupling_profile(ChainSpec(n, phi)));
}

}  // namespace

TEST_CASE("chain spec validation") {
    CHECK_NOTHROW(ChainSpec(5, 0.0));
    CHECK_NOTHROW(ChainSpec(300, 0.5));
    CHECK_THROWS_AS(ChainSpec(4, 0.25), InvalidArgument);
    CHECK_THROWS_AS(ChainSpec(20, -1e-9), InvalidArgument);
    CHECK_THROWS_AS(ChainSpec(20, 0.5000001), InvalidArgument);
    CHECK_THROWS_AS(ChainSpec(20, std::nan("")), InvalidArgument);
}

TEST_CASE("homogeneous profile") {
    const auto profile = coupling_profile(ChainSpec(20, 0.0));
    REQUIRE(profile.d().size() == 19);
    for (int i = 1; i <= 19; ++i) {
        CHECK(profile[i] == doctest::Approx(1.0).epsilon(1e-15));
    }
}

TEST_CASE("engineered profile is mirror symmetric") {
    const int n = 20;
    const auto profile = coupling_profile(ChainSpec(n, 0.5));
    CHECK(profile[1] == doctest::Approx(1.0).epsilon(1e-14));
    for (int i = 1; i < n; ++i) {
        CHECK(profile[i] == doctest::Approx(std::sqrt(i * (n - i) / 19.0)).epsilon(1e-13));
        CHECK(std::abs(profile[i] - profile[n - i]) < 1e-13);
    }
}

TEST_CASE("couplings positive across phi") {
    for (const int n : {5, 20, 300}) {
        for (const double phi : {0.0, 0.1, 0.25, 0.4, 0.5}) {
            const auto profile = coupling_profile(ChainSpec(n, phi));
            for (const double d : profile.d()) {
                CHECK(d > 0.0);
            }
        }
    }
}

TEST_CASE("D_10 at N=20, phi=1/4 against 50-digit arithmetic") {
    using big = boost::multiprecision::cpp_dec_float_50;
    const big nm1 = 19;
    const big angle = boost::multiprecision::acos(big(-1)) / 4;
    const big c = boost::multiprecision::cos(angle);
    const big s = boost::multiprecision::sin(angle);
    const big root = boost::multiprecision::sqrt(nm1);
    const big expected = (root * c + s * boost::multiprecision::sqrt(big(10 * 10))) / (root * (c + s));
    const double reference = expected.convert_to<double>();

    const auto profile = coupling_profile(ChainSpec(20, 0.25));
    CHECK(std::abs(profile[10] - reference) < 1e-14);
    CHECK(profile[10] == doctest::Approx(1.6471).epsilon(1e-4));
}

TEST_CASE("hamiltonian is tridiagonal with half couplings") {
    const auto h5 = hamiltonian_matrix(coupling_profile(ChainSpec(5, 0.0)));
    for (int r = 0; r < 5; ++r) {
        for (int c = 0; c < 5; ++c) {
            const double expected = std::abs(r - c) == 1 ? 0.5 : 0.0;
            CHECK(h5(r, c) == expected);
        }
    }
    const auto h20 = hamiltonian_matrix(coupling_profile(ChainSpec(20, 0.5)));
    for (int k = 1; k < 20; ++k) {
        CHECK(h20(k - 1, k) == doctest::Approx(0.5 * std::sqrt(k * (20.0 - k) / 19.0)).epsilon(1e-13));
        CHECK(h20(k, k - 1) == h20(k - 1, k));
    }
}

TEST_CASE("two-site spectrum") {
    const std::vector<double> couplings{1.0};
    const auto decomp = spectral_decomposition(couplings);
    CHECK_FALSE(decomp.spec().has_value());
    CHECK(decomp.eigenvalues()(0) == doctest::Approx(-0.5).epsilon(1e-15));
    CHECK(decomp.eigenvalues()(1) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("engineered spectrum is equally spaced") {
    const auto decomp = decompose(20, 0.5);
    const double gap = 1.0 / std::sqrt(19.0);
    for (int m = 1; m < 20; ++m) {
        CHECK(std::abs(decomp.eigenvalues()(m) - decomp.eigenvalues()(m - 1) - gap) < 1e-10);
    }
}

TEST_CASE("decomposition invariants") {
    for (const int n : {5, 20, 100}) {
        for (const double phi : {0.0, 0.125, 0.25, 0.375, 0.5}) {
            const auto profile = coupling_profile(ChainSpec(n, phi));
            const auto decomp = spectral_decomposition(profile);
            const Eigen::MatrixXd& v = decomp.eigenvectors();
            const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(n, n);
            CHECK((v.transpose() * v - identity).cwiseAbs().maxCoeff() < 1e-12);
            const Eigen::MatrixXd rebuilt = v * decomp.eigenvalues().asDiagonal() * v.transpose();
            CHECK((rebuilt - hamiltonian_matrix(profile)).cwiseAbs().maxCoeff() < 1e-12);
            for (int m = 1; m < n; ++m) {
                CHECK(decomp.eigenvalues()(m) > decomp.eigenvalues()(m - 1));
            }
            for (int m = 0; m < n; ++m) {
                Eigen::Index arg = 0;
                v.col(m).cwiseAbs().maxCoeff(&arg);
                CHECK(v(arg, m) > 0.0);
            }
        }
    }
}

TEST_CASE("decomposition is deterministic") {
    const auto a = decompose(50, 0.3);
    const auto b = decompose(50, 0.3);
    CHECK(a.eigenvalues() == b.eigenvalues());
    CHECK(a.eigenvectors() == b.eigenvectors());
}

TEST_CASE("amplitudes at t=0 are the identity") {
    const auto p = amplitudes(decompose(20, 0.25), 0.0);
    CHECK(max_abs(p.matrix() - Eigen::MatrixXcd::Identity(20, 20)) < 1e-13);
}

TEST_CASE("unitarity and symmetry up to N=300") {
    for (const int n : {5, 20, 100, 300}) {
        for (const double phi : {0.0, 0.125, 0.25, 0.375, 0.5}) {
            const auto decomp = decompose(n, phi);
            for (const double t : {0.0, 1.3, 57.0, 233.3, 500.0}) {
                const auto p = amplitudes(decomp, t);
                const Eigen::VectorXd column_norms = p.matrix().colwise().squaredNorm().transpose();
                CHECK((column_norms.array() - 1.0).abs().maxCoeff() < 1e-12);
                CHECK(max_abs(p.matrix() - p.matrix().transpose()) < 1e-12);
            }
        }
    }
}

TEST_CASE("composition of propagators") {
    const auto decomp = decompose(30, 0.2);
    for (const auto& [t1, t2] : std::vector<std::pair<double, double>>{{0.7, 2.1}, {10.0, 33.3}, {-4.0, 9.5}}) {
        const Eigen::MatrixXcd product = amplitudes(decomp, t1).matrix() * amplitudes(decomp, t2).matrix();
        CHECK(max_abs(amplitudes(decomp, t1 + t2).matrix() - product) < 1e-10);
    }
}

TEST_CASE("negative time reverses evolution") {
    const auto decomp = decompose(12, 0.4);
    const Eigen::MatrixXcd round = amplitudes(decomp, -3.3).matrix() * amplitudes(decomp, 3.3).matrix();
    CHECK(max_abs(round - Eigen::MatrixXcd::Identity(12, 12)) < 1e-12);
}

TEST_CASE("energy is conserved") {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> gauss;
    const auto profile = coupling_profile(ChainSpec(25, 0.3));
    const auto decomp = spectral_decomposition(profile);
    const Eigen::MatrixXcd h = hamiltonian_matrix(profile).cast<cplx>();
    Eigen::VectorXcd psi0(25);
    for (auto& z : psi0) {
        z = cplx(gauss(rng), gauss(rng));
    }
    psi0.normalize();
    const double e0 = (psi0.adjoint() * h * psi0)(0).real();
    for (const double t : {0.5, 7.0, 41.0, 120.0}) {
        const Eigen::VectorXcd psi = amplitudes(decomp, t).matrix() * psi0;
        CHECK(std::abs((psi.adjoint() * h * psi)(0).real() - e0) < 1e-10);
    }
}

TEST_CASE("mirror transfer of the engineered chain") {
    for (const int n : {20, 51, 200}) {
        const auto decomp = decompose(n, 0.5);
        const auto p = amplitudes(decomp, pi * std::sqrt(n - 1.0));
        for (int j = 1; j <= 3; ++j) {
            CHECK(std::abs(p.magnitude(n + 1 - j, j) - 1.0) < 1e-6);
        }
    }
    const auto p20 = amplitudes(decompose(20, 0.5), pi * std::sqrt(19.0));
    CHECK(p20.magnitude(20, 1) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("single amplitude and transfer block agree with the full matrix") {
    const auto decomp = decompose(15, 0.35);
    const auto p = amplitudes(decomp, 8.25);
    CHECK(std::abs(amplitude(decomp, 14, 2, 8.25) - p(14, 2)) < 1e-14);
    const auto block = transfer_block(decomp, 8.25);
    const auto block_from_matrix = transfer_block(p);
    for (int j = 1; j <= 3; ++j) {
        CHECK(std::abs(block.to_nm1[static_cast<std::size_t>(j - 1)] - p(14, j)) < 1e-14);
        CHECK(std::abs(block.to_n[static_cast<std::size_t>(j - 1)] - p(15, j)) < 1e-14);
        CHECK(block_from_matrix.to_n[static_cast<std::size_t>(j - 1)] == p(15, j));
    }
}

TEST_CASE("phase lies in [0, 1) and reproduces the amplitude") {
    const auto p = amplitudes(decompose(10, 0.1), 5.5);
    for (int k = 1; k <= 10; ++k) {
        for (int j = 1; j <= 10; ++j) {
            const double chi = p.phase(k, j);
            CHECK(chi >= 0.0);
            CHECK(chi < 1.0);
            CHECK(std::abs(std::polar(p.magnitude(k, j), 2.0 * pi * chi) - p(k, j)) < 1e-14);
        }
    }
}

TEST_CASE("one-excitation block matches full Hilbert space propagation") {
    const auto check = [](int n, double phi, double t) {
        const auto profile = coupling_profile(ChainSpec(n, phi));
        const auto p = amplitudes(spectral_decomposition(profile), t);
        const auto full = oracle::full_propagator(profile.d(), t);
        double worst = 0.0;
        for (int k = 1; k <= n; ++k) {
            for (int j = 1; j <= n; ++j) {
                worst = std::max(worst, std::abs(p(k, j) - oracle::full_amplitude(full, n, k, j)));
            }
        }
        return worst;
    };
    CHECK(check(6, 0.25, 3.7) < 1e-10);
    CHECK(check(5, 0.0, 11.0) < 1e-10);
    CHECK(check(7, 0.5, 2.2) < 1e-10);
    CHECK(check(8, 0.125, 6.4) < 1e-10);
}
