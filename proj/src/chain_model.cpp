#include "remcorr/chain_model.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "remcorr/errors.hpp"

namespace remcorr {

namespace {

constexpr double min_eigen_gap = 1e-10;

SpectralDecomposition decompose(std::optional<ChainSpec> spec, std::span<const double> couplings) {
    const auto n = static_cast<Eigen::Index>(couplings.size()) + 1;
    if (n < 2) {
        throw InvalidArgument("spectral_decomposition: need at least one coupling");
    }
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd sub(n - 1);
    for (Eigen::Index k = 0; k < n - 1; ++k) {
        sub(k) = 0.5 * couplings[static_cast<std::size_t>(k)];
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success) {
        throw NumericalFailure("spectral_decomposition: tridiagonal eigensolver did not converge");
    }

    Eigen::VectorXd values = solver.eigenvalues();
    Eigen::MatrixXd vectors = solver.eigenvectors();

    for (Eigen::Index m = 1; m < n; ++m) {
        if (values(m) - values(m - 1) <= min_eigen_gap) {
            throw NumericalFailure("spectral_decomposition: near-degenerate eigenvalues at index " +
                                   std::to_string(m));
        }
    }

    for (Eigen::Index m = 0; m < n; ++m) {
        Eigen::Index pivot = 0;
        vectors.col(m).cwiseAbs().maxCoeff(&pivot);
        if (vectors(pivot, m) < 0.0) {
            vectors.col(m) = -vectors.col(m);
        }
    }

    return {std::move(spec), std::move(values), std::move(vectors)};
}

}  // namespace

ChainSpec::ChainSpec(int n, double phi) : n_(n), phi_(phi) {
    if (n < min_length) {
        throw InvalidArgument("chain length n=" + std::to_string(n) + " must be >= " +
                              std::to_string(min_length));
    }
    if (!(phi >= 0.0 && phi <= 0.5)) {
        throw InvalidArgument("phi=" + std::to_string(phi) + " out of range [0, 0.5]");
    }
}

CouplingProfile::CouplingProfile(ChainSpec spec, std::vector<double> d)
    : spec_(spec), d_(std::move(d)) {
    if (d_.size() != static_cast<std::size_t>(spec_.n() - 1)) {
        throw InvalidArgument("coupling profile needs exactly n-1 couplings");
    }
}

CouplingProfile coupling_profile(const ChainSpec& spec) {
    const int n = spec.n();
    const double c = std::cos(spec.phi() * std::numbers::pi);
    const double s = std::sin(spec.phi() * std::numbers::pi);
    const double root = std::sqrt(static_cast<double>(n - 1));
    const double norm = root * (c + s);

    std::vector<double> d(static_cast<std::size_t>(n - 1));
    for (int i = 1; i < n; ++i) {
        const double inner = std::sqrt(static_cast<double>(i) * static_cast<double>(n - i));
        d[static_cast<std::size_t>(i - 1)] = (root * c + s * inner) / norm;
    }
    return {spec, std::move(d)};
}

Eigen::MatrixXd hamiltonian_matrix(std::span<const double> couplings) {
    const auto n = static_cast<Eigen::Index>(couplings.size()) + 1;
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index k = 0; k + 1 < n; ++k) {
        const double hop = 0.5 * couplings[static_cast<std::size_t>(k)];
        h(k, k + 1) = hop;
        h(k + 1, k) = hop;
    }
    return h;
}

Eigen::MatrixXd hamiltonian_matrix(const CouplingProfile& profile) {
    return hamiltonian_matrix(profile.d());
}

SpectralDecomposition::SpectralDecomposition(std::optional<ChainSpec> spec, Eigen::VectorXd eigenvalues,
                                             Eigen::MatrixXd eigenvectors)
    : spec_(std::move(spec)), eigenvalues_(std::move(eigenvalues)), eigenvectors_(std::move(eigenvectors)) {
    if (eigenvectors_.rows() != eigenvalues_.size() || eigenvectors_.cols() != eigenvalues_.size()) {
        throw InvalidArgument("SpectralDecomposition: eigenvector matrix must be N x N");
    }
}

SpectralDecomposition spectral_decomposition(const CouplingProfile& profile) {
    return decompose(profile.spec(), profile.d());
}

SpectralDecomposition spectral_decomposition(std::span<const double> couplings) {
    return decompose(std::nullopt, couplings);
}

double AmplitudeMatrix::phase(int k, int j) const {
    double chi = std::arg((*this)(k, j)) / (2.0 * std::numbers::pi);
    if (chi < 0.0) {
        chi += 1.0;
    }
    return chi >= 1.0 ? 0.0 : chi;
}

AmplitudeMatrix amplitudes(const SpectralDecomposition& decomp, double t) {
    const Eigen::Index n = decomp.n();
    Eigen::VectorXcd phases(n);
    for (Eigen::Index m = 0; m < n; ++m) {
        phases(m) = std::polar(1.0, -decomp.eigenvalues()(m) * t);
    }
    const Eigen::MatrixXcd v = decomp.eigenvectors().cast<cplx>();
    Eigen::MatrixXcd p = v * phases.asDiagonal() * v.transpose();
    return {t, std::move(p)};
}

cplx amplitude(const SpectralDecomposition& decomp, int k, int j, double t) {
    const auto& v = decomp.eigenvectors();
    const auto& lambda = decomp.eigenvalues();
    cplx sum{0.0, 0.0};
    for (Eigen::Index m = 0; m < lambda.size(); ++m) {
        sum += v(k - 1, m) * v(j - 1, m) * std::polar(1.0, -lambda(m) * t);
    }
    return sum;
}

TransferBlock transfer_block(const SpectralDecomposition& decomp, double t) {
    const auto& v = decomp.eigenvectors();
    const auto& lambda = decomp.eigenvalues();
    if (decomp.n() < ChainSpec::min_length) {
        throw InvalidArgument("transfer_block: sender and receiver overlap for n < 5");
    }
    const Eigen::Index last = decomp.n() - 1;
    TransferBlock block{};
    for (Eigen::Index m = 0; m < lambda.size(); ++m) {
        const cplx phase = std::polar(1.0, -lambda(m) * t);
        const cplx to_nm1 = v(last - 1, m) * phase;
        const cplx to_n = v(last, m) * phase;
        for (Eigen::Index j = 0; j < 3; ++j) {
            block.to_nm1[static_cast<std::size_t>(j)] += to_nm1 * v(j, m);
            block.to_n[static_cast<std::size_t>(j)] += to_n * v(j, m);
        }
    }
    return block;
}

TransferBlock transfer_block(const AmplitudeMatrix& amps) {
    const int n = amps.n();
    if (n < ChainSpec::min_length) {
        throw InvalidArgument("transfer_block: sender and receiver overlap for n < 5");
    }
    TransferBlock block{};
    for (int j = 1; j <= 3; ++j) {
        block.to_nm1[static_cast<std::size_t>(j - 1)] = amps(n - 1, j);
        block.to_n[static_cast<std::size_t>(j - 1)] = amps(n, j);
    }
    return block;
}

}  // namespace remcorr
