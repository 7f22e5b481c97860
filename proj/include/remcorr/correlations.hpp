#pragma once

#include <array>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "remcorr/chain_model.hpp"

namespace remcorr {

/// One-excitation initial state of the three-site sender.
///
///   a1 = cos(alpha1 pi/2) cos(alpha2 pi/2)
///   a2 = cos(alpha2 pi/2) sin(alpha1 pi/2) exp(2 pi i varphi1)
///   a3 = sin(alpha2 pi/2) exp(2 pi i varphi2)
class SenderState {
public:
    SenderState(double alpha1, double alpha2, double varphi1 = 0.0, double varphi2 = 0.0);

    [[nodiscard]] double alpha1() const noexcept { return alpha1_; }
    [[nodiscard]] double alpha2() const noexcept { return alpha2_; }
    [[nodiscard]] double varphi1() const noexcept { return varphi1_; }
    [[nodiscard]] double varphi2() const noexcept { return varphi2_; }
    [[nodiscard]] const std::array<cplx, 3>& a() const noexcept { return a_; }

private:
    double alpha1_;
    double alpha2_;
    double varphi1_;
    double varphi2_;
    std::array<cplx, 3> a_;
};

/// Throws InvalidArgument if any control parameter lies outside [0, 1].
[[nodiscard]] SenderState sender_state(double alpha1, double alpha2, double varphi1 = 0.0,
                                       double varphi2 = 0.0);

/// Receiver amplitudes f_{N-1}, f_N. Everything about the two-qubit receiver state
/// (an X matrix in the basis |0>, |N-1>, |N>, |N,N-1>) follows from these two numbers.
class ReceiverState {
public:
    /// Throws InvalidArgument when |f_{N-1}|^2 + |f_N|^2 exceeds 1 by more than 1e-12.
    ReceiverState(cplx f_nm1, cplx f_n);

    /// Build from populations R_{N-1}^2, R_N^2 and phases Phi (in units of 2 pi).
    [[nodiscard]] static ReceiverState from_populations(double rsq_nm1, double rsq_n, double phase_nm1 = 0.0,
                                                        double phase_n = 0.0);

    [[nodiscard]] cplx f_nm1() const noexcept { return f_nm1_; }
    [[nodiscard]] cplx f_n() const noexcept { return f_n_; }
    [[nodiscard]] double r_nm1() const { return std::abs(f_nm1_); }
    [[nodiscard]] double r_n() const { return std::abs(f_n_); }
    [[nodiscard]] double rsq_nm1() const { return std::norm(f_nm1_); }
    [[nodiscard]] double rsq_n() const { return std::norm(f_n_); }
    [[nodiscard]] double rsq() const { return rsq_nm1() + rsq_n(); }
    /// Phi_{N-1}, Phi_N in [0, 1).
    [[nodiscard]] double phase_nm1() const;
    [[nodiscard]] double phase_n() const;

    [[nodiscard]] Eigen::Matrix4cd density_matrix() const;

private:
    cplx f_nm1_;
    cplx f_n_;
};

/// f_k = sum_j a_j p_kj for k in {N-1, N}, j in {1, 2, 3}.
[[nodiscard]] ReceiverState receiver_state(const TransferBlock& block, const SenderState& sender);
[[nodiscard]] ReceiverState receiver_state(const AmplitudeMatrix& amps, const SenderState& sender);

struct DiscordPair {
    double q_ext;
    double q_r;
    double rsq;
    double rsq_nm1;
    double rsq_n;
};

/// -p log2 p - (1-p) log2 (1-p), with 0 log 0 = 0.
[[nodiscard]] double binary_entropy(double p);

/// Receiver/rest-of-chain discord; for the global pure state it is the entanglement entropy
/// -R^2 log2 R^2 - (1-R^2) log2 (1-R^2).
[[nodiscard]] double q_ext(const ReceiverState& state);
[[nodiscard]] double q_ext_from_rsq(double rsq);

/// Discord between the two receiver qubits, min over the measured side of the X-state
/// closed form. Depends only on the populations R_{N-1}^2 and R_N^2.
[[nodiscard]] double q_r_closed_form(const ReceiverState& state);
[[nodiscard]] double q_r_from_populations(double rsq_nm1, double rsq_n);

struct MeasurementDiscord {
    double value;    // min(q_n, q_nm1)
    double q_n;      // measurement side labelled N
    double q_nm1;    // measurement side labelled N-1
    double eta_n;    // minimising eta for each side
    double eta_nm1;
};

/// Mutual information minus classical correlation, with the classical part obtained by
/// minimising p0 S0 + p1 S1 over the projective-measurement parameter eta in [0, 1]
/// (dense grid of eta_grid_size nodes, then three parabolic refinement steps).
/// Independent of the closed form; used to check it.
[[nodiscard]] MeasurementDiscord q_r_measurement_oracle(const ReceiverState& state, int eta_grid_size = 1001);

[[nodiscard]] DiscordPair discord_pair(const ReceiverState& state);

struct CurveRow {
    double r_sq;
    double r_nm1_sq;
    double q_ext;
    double q_r;
};

/// For each fixed R_{N-1}^2, sweeps R^2 over [R_{N-1}^2, 1] in `samples` points.
/// R_{N-1}^2 = 1 collapses to the single point R^2 = 1.
[[nodiscard]] std::vector<CurveRow> discord_curves(std::span<const double> r_nm1_sq_values, int samples);

}  // namespace remcorr
