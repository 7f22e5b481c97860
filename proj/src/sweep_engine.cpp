#include "remcorr/sweep_engine.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <exception>
#include <string>
#include <unordered_map>

#include "remcorr/errors.hpp"

namespace remcorr {

namespace {

struct Grid {
    int count1;  // intervals along alpha1
    int count2;
    SubDomain domain;

    [[nodiscard]] std::size_t size() const {
        return static_cast<std::size_t>(count1 + 1) * static_cast<std::size_t>(count2 + 1);
    }
    [[nodiscard]] double alpha1(int i) const {
        return domain.alpha1_lo + (domain.alpha1_hi - domain.alpha1_lo) * i / count1;
    }
    [[nodiscard]] double alpha2(int j) const {
        return domain.alpha2_lo + (domain.alpha2_hi - domain.alpha2_lo) * j / count2;
    }
};

int intervals(double width, double step) {
    const double ratio = width / step;
    const double rounded = std::round(ratio);
    if (rounded < 1.0 || std::abs(rounded * step - width) > 1e-9) {
        throw InvalidArgument("sweep step " + std::to_string(step) + " does not divide edge " + std::to_string(width));
    }
    return static_cast<int>(rounded);
}

Grid make_grid(const SubDomain& domain, double step) {
    if (!(step > 0.0)) {
        throw InvalidArgument("sweep step must be positive");
    }
    return {intervals(domain.alpha1_hi - domain.alpha1_lo, step), intervals(domain.alpha2_hi - domain.alpha2_lo, step),
            domain};
}

SweepPoint evaluate_node(const TransferBlock& block, double alpha1, double alpha2, const SweepOptions& options) {
    const SenderState sender(alpha1, alpha2, options.varphi1, options.varphi2);
    const DiscordPair pair = discord_pair(receiver_state(block, sender));
    return {alpha1, alpha2, pair.q_ext, pair.q_r, pair.rsq, pair.rsq_nm1};
}

SweepPoint evaluate_index(const TransferBlock& block, const Grid& grid, std::size_t index,
                          const SweepOptions& options) {
    const auto row = static_cast<int>(index / static_cast<std::size_t>(grid.count2 + 1));
    const auto col = static_cast<int>(index % static_cast<std::size_t>(grid.count2 + 1));
    return evaluate_node(block, grid.alpha1(row), grid.alpha2(col), options);
}

// --- coverage rasterisation ---------------------------------------------------------

class Raster {
public:
    Raster(double cell_size, int cells) : cell_(cell_size), cells_(cells), bits_(static_cast<std::size_t>(cells * cells)) {}

    [[nodiscard]] int index_of(double q) const {
        const int idx = static_cast<int>(std::floor(std::clamp(q, 0.0, 1.0) / cell_));
        return std::clamp(idx, 0, cells_ - 1);
    }

    void mark(int x, int y, std::uint8_t bit) { bits_[static_cast<std::size_t>(x * cells_ + y)] |= bit; }

    void mark_point(const SweepPoint& p, std::uint8_t bit) { mark(index_of(p.q_r), index_of(p.q_ext), bit); }

    // Marks cells whose centres lie inside the triangle (q_r, q_ext) a, b, c.
    void fill_triangle(const SweepPoint& a, const SweepPoint& b, const SweepPoint& c, std::uint8_t bit) {
        const double det = (b.q_r - a.q_r) * (c.q_ext - a.q_ext) - (b.q_ext - a.q_ext) * (c.q_r - a.q_r);
        if (std::abs(det) < 1e-300) {
            return;
        }
        const int x_lo = index_of(std::min({a.q_r, b.q_r, c.q_r}));
        const int x_hi = index_of(std::max({a.q_r, b.q_r, c.q_r}));
        const int y_lo = index_of(std::min({a.q_ext, b.q_ext, c.q_ext}));
        const int y_hi = index_of(std::max({a.q_ext, b.q_ext, c.q_ext}));
        constexpr double slack = -1e-12;
        for (int x = x_lo; x <= x_hi; ++x) {
            const double px = (x + 0.5) * cell_;
            for (int y = y_lo; y <= y_hi; ++y) {
                const double py = (y + 0.5) * cell_;
                const double l1 = ((b.q_r - px) * (c.q_ext - py) - (b.q_ext - py) * (c.q_r - px)) / det;
                const double l2 = ((c.q_r - px) * (a.q_ext - py) - (c.q_ext - py) * (a.q_r - px)) / det;
                const double l3 = 1.0 - l1 - l2;
                if (l1 >= slack && l2 >= slack && l3 >= slack) {
                    mark(x, y, bit);
                }
            }
        }
    }

    [[nodiscard]] const std::vector<std::uint8_t>& bits() const { return bits_; }

private:
    double cell_;
    int cells_;
    std::vector<std::uint8_t> bits_;
};

// Recovers (rows, cols) when the points form a lexicographic rectangular grid.
std::optional<std::pair<int, int>> grid_shape(const std::vector<SweepPoint>& points) {
    if (points.empty()) {
        return std::nullopt;
    }
    std::size_t cols = 0;
    while (cols < points.size() && points[cols].alpha1 == points[0].alpha1) {
        ++cols;
    }
    if (cols < 2 || points.size() % cols != 0) {
        return std::nullopt;
    }
    const std::size_t rows = points.size() / cols;
    if (rows < 2) {
        return std::nullopt;
    }
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            const auto& p = points[r * cols + c];
            if (std::abs(p.alpha1 - points[r * cols].alpha1) > 1e-12 || std::abs(p.alpha2 - points[c].alpha2) > 1e-12) {
                return std::nullopt;
            }
        }
    }
    return std::pair{static_cast<int>(rows), static_cast<int>(cols)};
}

void rasterise(Raster& raster, const std::vector<SweepPoint>& points, std::uint8_t bit) {
    for (const auto& p : points) {
        raster.mark_point(p, bit);
    }
    const auto shape = grid_shape(points);
    if (!shape) {
        return;
    }
    const auto [rows, cols] = *shape;
    const auto at = [&](int r, int c) -> const SweepPoint& {
        return points[static_cast<std::size_t>(r * cols + c)];
    };
    for (int r = 0; r + 1 < rows; ++r) {
        for (int c = 0; c + 1 < cols; ++c) {
            raster.fill_triangle(at(r, c), at(r + 1, c), at(r + 1, c + 1), bit);
            raster.fill_triangle(at(r, c), at(r + 1, c + 1), at(r, c + 1), bit);
        }
    }
}

}  // namespace

std::string_view to_string(SubDomainId id) {
    switch (id) {
        case SubDomainId::D1: return "D1";
        case SubDomainId::D2: return "D2";
        case SubDomainId::D3: return "D3";
        case SubDomainId::D4: return "D4";
        case SubDomainId::Full: return "FULL";
    }
    return "?";
}

std::optional<SubDomainId> parse_subdomain(std::string_view name) {
    for (const auto id : {SubDomainId::D1, SubDomainId::D2, SubDomainId::D3, SubDomainId::D4, SubDomainId::Full}) {
        if (name == to_string(id)) {
            return id;
        }
    }
    return std::nullopt;
}

SubDomain SubDomain::of(SubDomainId id) {
    switch (id) {
        case SubDomainId::D1: return {id, 0.0, 0.5, 0.0, 0.5};
        case SubDomainId::D2: return {id, 0.5, 1.0, 0.0, 0.5};
        case SubDomainId::D3: return {id, 0.0, 0.5, 0.5, 1.0};
        case SubDomainId::D4: return {id, 0.5, 1.0, 0.5, 1.0};
        case SubDomainId::Full: return {id, 0.0, 1.0, 0.0, 1.0};
    }
    throw InvalidArgument("unknown sub-domain");
}

std::vector<SweepPoint> sweep(const SpectralDecomposition& decomp, double t, const SubDomain& domain,
                              const SweepOptions& options) {
    const Grid grid = make_grid(domain, options.step);
    static_cast<void>(SenderState(0.0, 0.0, options.varphi1, options.varphi2));
    const TransferBlock block = transfer_block(decomp, t);

    const std::size_t count = grid.size();
    std::vector<SweepPoint> points(count);
    std::vector<std::exception_ptr> errors(count);
    const auto total = static_cast<long>(count);
#pragma omp parallel for schedule(static)
    for (long i = 0; i < total; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        try {
            points[idx] = evaluate_index(block, grid, idx, options);
        } catch (...) {
            errors[idx] = std::current_exception();
        }
    }
    for (const auto& error : errors) {
        if (error) {
            std::rethrow_exception(error);
        }
    }
    return points;
}

std::vector<SweepPoint> sweep_serial(const SpectralDecomposition& decomp, double t, const SubDomain& domain,
                                     const SweepOptions& options) {
    const Grid grid = make_grid(domain, options.step);
    const TransferBlock block = transfer_block(decomp, t);
    std::vector<SweepPoint> points;
    points.reserve(grid.size());
    for (std::size_t idx = 0; idx < grid.size(); ++idx) {
        points.push_back(evaluate_index(block, grid, idx, options));
    }
    return points;
}

CoverageReport coverage(const SweepsByDomain& points_by_subdomain, double cell_size) {
    if (!(cell_size > 0.0 && cell_size < 1.0)) {
        throw InvalidArgument("coverage: cell_size must lie in (0, 1)");
    }
    for (const auto id : quadrants) {
        if (!points_by_subdomain.contains(id)) {
            throw MissingSubdomain("coverage: missing sub-domain " + std::string(to_string(id)));
        }
    }
    const int cells = static_cast<int>(std::ceil(1.0 / cell_size - 1e-9));
    Raster raster(cell_size, cells);
    for (std::size_t q = 0; q < quadrants.size(); ++q) {
        rasterise(raster, points_by_subdomain.at(quadrants[q]), static_cast<std::uint8_t>(1u << q));
    }

    CoverageReport report{};
    report.cell_size = cell_size;
    report.cells_per_axis = cells;
    report.multiplicity.resize(raster.bits().size());

    int ring = 0;
    const auto occupied = [&](int x, int y) {
        return x >= 0 && y >= 0 && x < cells && y < cells && raster.bits()[static_cast<std::size_t>(x * cells + y)] != 0;
    };
    for (int x = 0; x < cells; ++x) {
        for (int y = 0; y < cells; ++y) {
            const auto idx = static_cast<std::size_t>(x * cells + y);
            const int count = std::popcount(static_cast<unsigned>(raster.bits()[idx]));
            report.multiplicity[idx] = static_cast<std::uint8_t>(count);
            if (count == 0) {
                continue;
            }
            ++report.occupied_cells;
            ++report.multiplicity_histogram[static_cast<std::size_t>(count - 1)];
            if (!occupied(x - 1, y) || !occupied(x + 1, y) || !occupied(x, y - 1) || !occupied(x, y + 1)) {
                ++ring;
            }
        }
    }
    const double cell_area = cell_size * cell_size;
    report.area_estimate = std::min(report.occupied_cells * cell_area, 1.0);
    report.area_uncertainty = ring * cell_area;

    std::unordered_map<int, int> d1_cells;
    for (const auto& p : points_by_subdomain.at(SubDomainId::D1)) {
        ++d1_cells[raster.index_of(p.q_r) * cells + raster.index_of(p.q_ext)];
    }
    for (const auto& [cell, count] : d1_cells) {
        if (count > 1) {
            report.d1_collisions += count;
        }
    }
    return report;
}

MapExperiment run_map_experiment(int n, double phi, const SweepOptions& options, double cell_size) {
    const ChainSpec spec(n, phi);
    const SpectralDecomposition decomp = spectral_decomposition(coupling_profile(spec));
    TimeOptimum optimum = find_first_maximum(decomp, SenderState(0.0, 0.0));

    SweepsByDomain sweeps;
    for (const auto id : quadrants) {
        sweeps.emplace(id, sweep(decomp, optimum.t0, SubDomain::of(id), options));
    }
    CoverageReport report = coverage(sweeps, cell_size);
    return {std::move(optimum), std::move(sweeps), std::move(report)};
}

}  // namespace remcorr
