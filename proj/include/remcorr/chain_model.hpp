#pragma once

#include <array>
#include <complex>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace remcorr {

using cplx = std::complex<double>;

/// Chain length and inhomogeneity parameter.
///
/// phi interpolates between the homogeneous chain (phi = 0, all couplings 1) and the
/// fully engineered mirror-symmetric chain (phi = 1/2). N >= 5 keeps the three-site
/// sender and the two-site receiver disjoint.
class ChainSpec {
public:
    static constexpr int min_length = 5;

    ChainSpec(int n, double phi);

    [[nodiscard]] int n() const noexcept { return n_; }
    [[nodiscard]] double phi() const noexcept { return phi_; }

private:
    int n_;
    double phi_;
};

/// The N-1 nearest-neighbour exchange constants D_1..D_{N-1}.
class CouplingProfile {
public:
    CouplingProfile(ChainSpec spec, std::vector<double> d);

    [[nodiscard]] const ChainSpec& spec() const noexcept { return spec_; }
    [[nodiscard]] std::span<const double> d() const noexcept { return d_; }
    /// 1-based bond index, D_i couples sites i and i+1.
    [[nodiscard]] double operator[](int i) const { return d_.at(static_cast<std::size_t>(i - 1)); }

private:
    ChainSpec spec_;
    std::vector<double> d_;
};

[[nodiscard]] CouplingProfile coupling_profile(const ChainSpec& spec);

/// One-excitation block of the XY Hamiltonian with spin-1/2 operators:
/// zero diagonal, hopping D_k / 2 between sites k and k+1.
[[nodiscard]] Eigen::MatrixXd hamiltonian_matrix(const CouplingProfile& profile);
[[nodiscard]] Eigen::MatrixXd hamiltonian_matrix(std::span<const double> couplings);

/// Eigenpairs of the one-excitation Hamiltonian. Eigenvalues ascend; each eigenvector
/// has its largest-magnitude component positive. Column m of eigenvectors() is the
/// m-th eigenvector expressed in the site basis |1>..|N>.
class SpectralDecomposition {
public:
    SpectralDecomposition(std::optional<ChainSpec> spec, Eigen::VectorXd eigenvalues,
                          Eigen::MatrixXd eigenvectors);

    [[nodiscard]] int n() const noexcept { return static_cast<int>(eigenvalues_.size()); }
    /// Absent for decompositions built from a raw coupling list.
    [[nodiscard]] const std::optional<ChainSpec>& spec() const noexcept { return spec_; }
    [[nodiscard]] const Eigen::VectorXd& eigenvalues() const noexcept { return eigenvalues_; }
    [[nodiscard]] const Eigen::MatrixXd& eigenvectors() const noexcept { return eigenvectors_; }

private:
    std::optional<ChainSpec> spec_;
    Eigen::VectorXd eigenvalues_;
    Eigen::MatrixXd eigenvectors_;
};

/// Throws NumericalFailure if the eigensolver fails or two eigenvalues are closer than 1e-10.
[[nodiscard]] SpectralDecomposition spectral_decomposition(const CouplingProfile& profile);
[[nodiscard]] SpectralDecomposition spectral_decomposition(std::span<const double> couplings);

/// p_kj(t) = <k| exp(-iHt) |j>, sites 1-based.
class AmplitudeMatrix {
public:
    AmplitudeMatrix(double t, Eigen::MatrixXcd p) : t_(t), p_(std::move(p)) {}

    [[nodiscard]] double t() const noexcept { return t_; }
    [[nodiscard]] int n() const noexcept { return static_cast<int>(p_.rows()); }
    [[nodiscard]] const Eigen::MatrixXcd& matrix() const noexcept { return p_; }
    [[nodiscard]] cplx operator()(int k, int j) const { return p_(k - 1, j - 1); }
    /// r_kj = |p_kj|
    [[nodiscard]] double magnitude(int k, int j) const { return std::abs((*this)(k, j)); }
    /// chi_kj in [0, 1) with p_kj = r_kj exp(2 pi i chi_kj).
    [[nodiscard]] double phase(int k, int j) const;

private:
    double t_;
    Eigen::MatrixXcd p_;
};

[[nodiscard]] AmplitudeMatrix amplitudes(const SpectralDecomposition& decomp, double t);

/// Single amplitude p_kj(t) in O(N).
[[nodiscard]] cplx amplitude(const SpectralDecomposition& decomp, int k, int j, double t);

/// The 2x3 block of p(t) linking sender sites 1..3 to receiver sites N-1, N.
struct TransferBlock {
    std::array<cplx, 3> to_nm1;  // p_{N-1, j}
    std::array<cplx, 3> to_n;    // p_{N, j}
};

[[nodiscard]] TransferBlock transfer_block(const SpectralDecomposition& decomp, double t);
[[nodiscard]] TransferBlock transfer_block(const AmplitudeMatrix& amps);

}  // namespace remcorr
