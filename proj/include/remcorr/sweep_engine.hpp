#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string_view>
#include <vector>

#include "remcorr/chain_model.hpp"
#include "remcorr/correlations.hpp"
#include "remcorr/optimizer.hpp"

namespace remcorr {

enum class SubDomainId { D1, D2, D3, D4, Full };

[[nodiscard]] std::string_view to_string(SubDomainId id);
[[nodiscard]] std::optional<SubDomainId> parse_subdomain(std::string_view name);

/// Closed rectangle in the (alpha1, alpha2) control plane.
struct SubDomain {
    SubDomainId id;
    double alpha1_lo;
    double alpha1_hi;
    double alpha2_lo;
    double alpha2_hi;

    /// D1 = [0,1/2]^2, D2 = [1/2,1]x[0,1/2], D3 = [0,1/2]x[1/2,1], D4 = [1/2,1]^2, Full = [0,1]^2.
    [[nodiscard]] static SubDomain of(SubDomainId id);
};

inline constexpr std::array<SubDomainId, 4> quadrants{SubDomainId::D1, SubDomainId::D2, SubDomainId::D3,
                                                      SubDomainId::D4};

struct SweepPoint {
    double alpha1;
    double alpha2;
    double q_ext;
    double q_r;
    double rsq;
    double rsq_nm1;
};

struct SweepOptions {
    double step = 0.05;
    double varphi1 = 0.0;
    double varphi2 = 0.0;
};

/// Evaluates (Q_ext, Q_R) on every grid node of the sub-domain at time t. Rows are
/// lexicographic in (alpha1, alpha2). The step must divide both rectangle edges.
/// Grid nodes are evaluated in parallel; output order does not depend on the schedule.
[[nodiscard]] std::vector<SweepPoint> sweep(const SpectralDecomposition& decomp, double t, const SubDomain& domain,
                                            const SweepOptions& options = {});
/// Single-threaded reference for sweep(); bitwise identical output.
[[nodiscard]] std::vector<SweepPoint> sweep_serial(const SpectralDecomposition& decomp, double t,
                                                   const SubDomain& domain, const SweepOptions& options = {});

using SweepsByDomain = std::map<SubDomainId, std::vector<SweepPoint>>;

/// Occupancy of the (Q_R, Q_ext) unit square.
///
/// A cell is occupied by a sub-domain if the image of one of its grid nodes lands in the cell,
/// or if the cell centre lies inside the image of a grid quad (each quad split into two
/// triangles). Multiplicity counts distinct sub-domains per cell.
struct CoverageReport {
    double cell_size;
    int cells_per_axis;
    int occupied_cells;
    double area_estimate;
    double area_uncertainty;                       // occupied boundary ring, in area units
    std::array<int, 4> multiplicity_histogram;     // cells reached by exactly 1, 2, 3, 4 sub-domains
    int d1_collisions;                             // D1 grid nodes sharing a cell with another D1 node
    std::vector<std::uint8_t> multiplicity;        // row-major [q_r cell][q_ext cell]

    [[nodiscard]] int multiplicity_at(int q_r_cell, int q_ext_cell) const {
        return multiplicity[static_cast<std::size_t>(q_r_cell * cells_per_axis + q_ext_cell)];
    }
};

/// Requires all four quadrants D1..D4. Throws MissingSubdomain otherwise.
[[nodiscard]] CoverageReport coverage(const SweepsByDomain& points_by_subdomain, double cell_size);

struct MapExperiment {
    TimeOptimum optimum;
    SweepsByDomain sweeps;
    CoverageReport coverage;
};

/// Optimises t0 for the sender |1>, sweeps D1..D4 at t0 and reports coverage.
[[nodiscard]] MapExperiment run_map_experiment(int n, double phi, const SweepOptions& options = {},
                                               double cell_size = 0.02);

}  // namespace remcorr
