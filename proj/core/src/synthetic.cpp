#include "pitplan/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace pitplan {

namespace {

constexpr double kRockDensity = 2.7;  // t/m^3

struct OreBody {
  double cx, cy, cz;  // center, block units
  double rx, ry, rz;  // semi-axes, block units
  double peak;        // grade at center
};

struct Wave {
  double amp, fi, fj, fk, phase;
};

}  // namespace

SyntheticDeposit generate_synthetic_deposit(std::uint64_t seed, GridDims dims, double block_size,
                                            int n_domains, int n_drillholes) {
  if (dims.nx <= 0 || dims.ny <= 0 || dims.nz <= 0)
    throw std::runtime_error("synthetic deposit dims must be positive");
  if (n_domains < 1) throw std::runtime_error("synthetic deposit needs n_domains >= 1");
  if (n_drillholes < 0 || n_drillholes > dims.nx * dims.ny)
    throw std::runtime_error("drillhole count must be in [0, nx*ny]");
  if (!(block_size > 0.0)) throw std::runtime_error("block size must be positive");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  constexpr double tau = 2.0 * std::numbers::pi;

  const int n_bodies = 1 + static_cast<int>(rng() % 2) + (dims.count() >= 2000 ? 1 : 0);
  std::vector<OreBody> bodies;
  for (int b = 0; b < n_bodies; ++b) {
    OreBody body;
    body.cx = (0.25 + 0.5 * unit(rng)) * dims.nx;
    body.cy = (0.25 + 0.5 * unit(rng)) * dims.ny;
    body.cz = (0.35 + 0.4 * unit(rng)) * dims.nz;
    body.rx = std::max(1.5, (0.16 + 0.17 * unit(rng)) * dims.nx);
    body.ry = std::max(1.5, (0.16 + 0.17 * unit(rng)) * dims.ny);
    body.rz = std::max(1.2, (0.18 + 0.22 * unit(rng)) * dims.nz);
    body.peak = 0.05 + 0.05 * unit(rng);
    bodies.push_back(body);
  }

  // Background stays clearly below a ~0.25% cutoff so the pit forms around
  // the bodies rather than engulfing the model.
  std::vector<Wave> waves;
  for (int w = 0; w < 3; ++w)
    waves.push_back({0.0001 + 0.0004 * unit(rng), 0.5 + unit(rng), 0.5 + unit(rng), 0.5 + unit(rng),
                     tau * unit(rng)});
  // Domain boundary undulation, shared across boundaries.
  const Wave dom_wave{0.06 * dims.nz, 0.8 + 0.8 * unit(rng), 0.8 + 0.8 * unit(rng), 0.0, tau * unit(rng)};

  BlockModel model(dims, Vec3{block_size, block_size, block_size}, Vec3{0.0, 0.0, 0.0}, "Cu");
  const double tonnage = block_size * block_size * block_size * kRockDensity;

  for (Block& blk : model.blocks) {
    const double x = blk.index.i + 0.5, y = blk.index.j + 0.5, z = blk.index.k + 0.5;
    double grade = 0.0;
    for (const OreBody& b : bodies) {
      const double qx = (x - b.cx) / b.rx, qy = (y - b.cy) / b.ry, qz = (z - b.cz) / b.rz;
      grade += b.peak * std::exp(-3.5 * (qx * qx + qy * qy + qz * qz));
    }
    for (const Wave& w : waves)
      grade += w.amp * (0.5 + 0.5 * std::cos(tau * (w.fi * x / dims.nx + w.fj * y / dims.ny +
                                                    w.fk * z / dims.nz) +
                                             w.phase));
    blk.grade = std::clamp(grade, 0.0, 1.0);

    const double wobble =
        dom_wave.amp * std::cos(tau * (dom_wave.fi * x / dims.nx + dom_wave.fj * y / dims.ny) +
                                dom_wave.phase);
    int band = static_cast<int>((z + wobble) * n_domains / dims.nz);
    blk.domain = std::clamp(band, 0, n_domains - 1);
    blk.tonnage = tonnage;
  }

  // Drillhole plan: half the holes target ore bodies (infill drilling), the
  // rest spread uniformly; all locations distinct.
  std::vector<char> used(static_cast<size_t>(dims.nx) * dims.ny, 0);
  std::vector<std::pair<int, int>> holes;
  std::normal_distribution<double> jitter(0.0, 1.0);
  const int targeted = n_drillholes / 2;
  for (int h = 0; h < targeted; ++h) {
    const OreBody& b = bodies[static_cast<size_t>(h) % bodies.size()];
    bool placed = false;
    for (int attempt = 0; attempt < 20 && !placed; ++attempt) {
      const int pi = std::clamp(static_cast<int>(b.cx + jitter(rng) * b.rx * 0.5), 0, dims.nx - 1);
      const int pj = std::clamp(static_cast<int>(b.cy + jitter(rng) * b.ry * 0.5), 0, dims.ny - 1);
      const size_t cell = static_cast<size_t>(pj) * dims.nx + pi;
      if (!used[cell]) {
        used[cell] = 1;
        holes.push_back({pi, pj});
        placed = true;
      }
    }
  }
  std::vector<int> cells;
  for (size_t c = 0; c < used.size(); ++c)
    if (!used[c]) cells.push_back(static_cast<int>(c));
  for (int h = static_cast<int>(holes.size()); h < n_drillholes && !cells.empty(); ++h) {
    const size_t pick = rng() % cells.size();
    const int cell = cells[pick];
    cells[pick] = cells.back();
    cells.pop_back();
    holes.push_back({cell % dims.nx, cell / dims.nx});
  }

  std::vector<DrillSample> samples;
  for (const auto& [pi, pj] : holes) {
    for (int k = 0; k < dims.nz; ++k) {
      const Block& blk = model.at({pi, pj, k});
      const Vec3 c = model.centroid(blk.index);
      samples.push_back({c.x, c.y, c.z, blk.grade, blk.domain});
    }
  }

  return SyntheticDeposit{std::move(model), std::move(samples)};
}

EconomicModel default_economics(int n_domains) {
  EconomicModel econ;
  econ.price_per_tonne_metal = 7673.0;
  econ.mining_cost = 4.2;
  econ.processing_cost = 15.0;
  econ.selling_cost = 1.0;
  econ.rehab_cost = 1.0;
  econ.cutoff_grade = 0.0025;
  econ.discount_rate = 0.1;
  for (int d = 0; d < n_domains; ++d) {
    const double span = n_domains > 1 ? static_cast<double>(d) / (n_domains - 1) : 0.0;
    econ.recovery_by_domain[d] = 0.92 - 0.17 * span;
  }
  return econ;
}

Calendar default_calendar(double total_tonnage, int t_max) {
  Calendar cal;
  const double mining = total_tonnage / 15.0;
  for (int t = 0; t < t_max; ++t) cal.periods.push_back({mining, mining / 4.0});
  return cal;
}

}  // namespace pitplan
