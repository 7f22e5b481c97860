#include "remcorr/correlations.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "remcorr/errors.hpp"

namespace remcorr {

namespace {

constexpr double rounding_window = 1e-12;
constexpr double log_cutoff = 1e-300;

double xlog2x(double x) {
    return x < log_cutoff ? 0.0 : x * std::log2(x);
}

double clamp_unit(double x) {
    return std::clamp(x, 0.0, 1.0);
}

double phase_of(cplx z) {
    double phase = std::arg(z) / (2.0 * std::numbers::pi);
    if (phase < 0.0) {
        phase += 1.0;
    }
    return phase >= 1.0 ? 0.0 : phase;
}

void check_unit_interval(double value, const char* name) {
    if (!(value >= 0.0 && value <= 1.0)) {
        throw InvalidArgument(std::string(name) + "=" + std::to_string(value) + " out of range [0, 1]");
    }
}

// X-state discord with the measurement side that pairs `measured` with the outcome
// probabilities; `other` enters the square root. Argument order matches the N-side formula:
// measured = R_{N-1}^2, other = R_N^2.
double closed_form_side(double measured, double other) {
    const double raw_total = measured + other;
    const double total = clamp_unit(raw_total);
    const double arg = 1.0 - 4.0 * other * (1.0 - raw_total);
    if (arg < -rounding_window || arg > 1.0 + rounding_window) {
        throw DomainError("q_r: sqrt argument " + std::to_string(arg) + " outside [0, 1]");
    }
    const double s = std::sqrt(clamp_unit(arg));
    return 1.0 - xlog2x(measured) - xlog2x(1.0 - measured) + xlog2x(total) + xlog2x(1.0 - total) -
           0.5 * xlog2x(1.0 - s) - 0.5 * xlog2x(1.0 + s);
}

double conditional_entropy(double theta) {
    const double th = clamp_unit(theta);
    return -xlog2x(0.5 * (1.0 - th)) - xlog2x(0.5 * (1.0 + th));
}

// p0 S0 + p1 S1 for a measurement parameterised by eta.
double averaged_entropy(double eta, double measured, double other) {
    const double total = measured + other;
    double sum = 0.0;
    for (int i = 0; i < 2; ++i) {
        const double sign = i == 0 ? 1.0 : -1.0;
        const double p = 0.5 * (1.0 + sign * eta * (1.0 - 2.0 * measured));
        if (p < log_cutoff) {
            continue;
        }
        const double shifted = 1.0 - 2.0 * other + sign * eta * (1.0 - 2.0 * total);
        const double inner = (1.0 - eta * eta) * measured * other + 0.25 * shifted * shifted;
        const double theta = std::sqrt(std::max(inner, 0.0)) / p;
        sum += p * conditional_entropy(theta);
    }
    return sum;
}

struct EtaMinimum {
    double value;
    double eta;
};

EtaMinimum minimise_over_eta(double measured, double other, int grid_size) {
    const auto f = [&](double eta) { return averaged_entropy(eta, measured, other); };
    const double h = 1.0 / static_cast<double>(grid_size - 1);

    std::vector<double> values(static_cast<std::size_t>(grid_size));
    for (int k = 0; k < grid_size; ++k) {
        values[static_cast<std::size_t>(k)] = f(k * h);
    }
    const double lowest = *std::min_element(values.begin(), values.end());
    // Smallest eta among (numerically) tied minimisers; flat profiles report eta = 0.
    int best = 0;
    while (values[static_cast<std::size_t>(best)] > lowest + rounding_window) {
        ++best;
    }

    EtaMinimum result{values[static_cast<std::size_t>(best)], best * h};
    if (best == 0 || best == grid_size - 1) {
        return result;
    }

    double width = h;
    for (int step = 0; step < 3; ++step) {
        const double left = std::max(result.eta - width, 0.0);
        const double right = std::min(result.eta + width, 1.0);
        const double fl = f(left);
        const double fr = f(right);
        const double fm = result.value;
        const double denom = (result.eta - left) * (fm - fr) - (result.eta - right) * (fm - fl);
        if (denom != 0.0) {
            const double numer = (result.eta - left) * (result.eta - left) * (fm - fr) -
                                 (result.eta - right) * (result.eta - right) * (fm - fl);
            const double vertex = std::clamp(result.eta - 0.5 * numer / denom, left, right);
            const double fv = f(vertex);
            if (fv < result.value) {
                result = {fv, vertex};
            }
        }
        width *= 0.25;
    }
    return result;
}

// I - C for one measurement side, with C minimised over eta.
EtaMinimum measured_discord(double measured, double other, int grid_size) {
    const double total = clamp_unit(measured + other);
    const double mutual_information =
        binary_entropy(measured) + binary_entropy(other) + xlog2x(total) + xlog2x(1.0 - total);
    const EtaMinimum min = minimise_over_eta(measured, other, grid_size);
    const double classical = binary_entropy(other) - min.value;
    return {mutual_information - classical, min.eta};
}

}  // namespace

SenderState::SenderState(double alpha1, double alpha2, double varphi1, double varphi2)
    : alpha1_(alpha1), alpha2_(alpha2), varphi1_(varphi1), varphi2_(varphi2) {
    check_unit_interval(alpha1, "alpha1");
    check_unit_interval(alpha2, "alpha2");
    check_unit_interval(varphi1, "varphi1");
    check_unit_interval(varphi2, "varphi2");

    const double half_pi = 0.5 * std::numbers::pi;
    const double c1 = std::cos(alpha1 * half_pi);
    const double s1 = std::sin(alpha1 * half_pi);
    const double c2 = std::cos(alpha2 * half_pi);
    const double s2 = std::sin(alpha2 * half_pi);
    const double two_pi = 2.0 * std::numbers::pi;
    a_ = {cplx{c1 * c2, 0.0}, std::polar(c2 * s1, two_pi * varphi1), std::polar(s2, two_pi * varphi2)};
}

SenderState sender_state(double alpha1, double alpha2, double varphi1, double varphi2) {
    return {alpha1, alpha2, varphi1, varphi2};
}

ReceiverState::ReceiverState(cplx f_nm1, cplx f_n) : f_nm1_(f_nm1), f_n_(f_n) {
    const double total = rsq();
    if (!(total <= 1.0 + rounding_window)) {
        throw InvalidArgument("receiver populations sum to " + std::to_string(total) + " > 1");
    }
}

ReceiverState ReceiverState::from_populations(double rsq_nm1, double rsq_n, double phase_nm1, double phase_n) {
    if (!(rsq_nm1 >= 0.0 && rsq_n >= 0.0)) {
        throw InvalidArgument("receiver populations must be non-negative");
    }
    const double two_pi = 2.0 * std::numbers::pi;
    return {std::polar(std::sqrt(rsq_nm1), two_pi * phase_nm1), std::polar(std::sqrt(rsq_n), two_pi * phase_n)};
}

double ReceiverState::phase_nm1() const {
    return phase_of(f_nm1_);
}

double ReceiverState::phase_n() const {
    return phase_of(f_n_);
}

Eigen::Matrix4cd ReceiverState::density_matrix() const {
    Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
    rho(0, 0) = 1.0 - rsq();
    rho(1, 1) = rsq_nm1();
    rho(2, 2) = rsq_n();
    rho(1, 2) = f_nm1_ * std::conj(f_n_);
    rho(2, 1) = std::conj(f_nm1_) * f_n_;
    return rho;
}

ReceiverState receiver_state(const TransferBlock& block, const SenderState& sender) {
    cplx f_nm1{0.0, 0.0};
    cplx f_n{0.0, 0.0};
    for (std::size_t j = 0; j < 3; ++j) {
        f_nm1 += sender.a()[j] * block.to_nm1[j];
        f_n += sender.a()[j] * block.to_n[j];
    }
    return {f_nm1, f_n};
}

ReceiverState receiver_state(const AmplitudeMatrix& amps, const SenderState& sender) {
    return receiver_state(transfer_block(amps), sender);
}

double binary_entropy(double p) {
    const double q = clamp_unit(p);
    return -xlog2x(q) - xlog2x(1.0 - q);
}

double q_ext_from_rsq(double rsq) {
    return binary_entropy(rsq);
}

double q_ext(const ReceiverState& state) {
    return q_ext_from_rsq(state.rsq());
}

double q_r_from_populations(double rsq_nm1, double rsq_n) {
    const double q_n = closed_form_side(rsq_nm1, rsq_n);
    const double q_nm1 = closed_form_side(rsq_n, rsq_nm1);
    return clamp_unit(std::min(q_n, q_nm1));
}

double q_r_closed_form(const ReceiverState& state) {
    return q_r_from_populations(state.rsq_nm1(), state.rsq_n());
}

MeasurementDiscord q_r_measurement_oracle(const ReceiverState& state, int eta_grid_size) {
    if (eta_grid_size < 101) {
        throw InvalidArgument("eta_grid_size must be >= 101");
    }
    const double rho_nm1 = state.rsq_nm1();
    const double rho_n = state.rsq_n();
    // Domain guard shared with the closed form.
    static_cast<void>(closed_form_side(rho_nm1, rho_n));
    static_cast<void>(closed_form_side(rho_n, rho_nm1));

    const EtaMinimum side_n = measured_discord(rho_nm1, rho_n, eta_grid_size);
    const EtaMinimum side_nm1 = measured_discord(rho_n, rho_nm1, eta_grid_size);
    return {clamp_unit(std::min(side_n.value, side_nm1.value)), side_n.value, side_nm1.value, side_n.eta,
            side_nm1.eta};
}

DiscordPair discord_pair(const ReceiverState& state) {
    return {q_ext(state), q_r_closed_form(state), state.rsq(), state.rsq_nm1(), state.rsq_n()};
}

std::vector<CurveRow> discord_curves(std::span<const double> r_nm1_sq_values, int samples) {
    if (samples < 2) {
        throw InvalidArgument("discord_curves: samples must be >= 2");
    }
    std::vector<CurveRow> rows;
    for (const double r_nm1_sq : r_nm1_sq_values) {
        check_unit_interval(r_nm1_sq, "r_nm1_sq");
        const int count = r_nm1_sq == 1.0 ? 1 : samples;
        for (int k = 0; k < count; ++k) {
            const double r_sq =
                count == 1 ? 1.0
                           : (k == count - 1 ? 1.0 : r_nm1_sq + (1.0 - r_nm1_sq) * k / static_cast<double>(count - 1));
            const double r_n_sq = std::max(r_sq - r_nm1_sq, 0.0);
            rows.push_back({r_sq, r_nm1_sq, q_ext_from_rsq(r_sq), q_r_from_populations(r_nm1_sq, r_n_sq)});
        }
    }
    return rows;
}

}  // namespace remcorr
