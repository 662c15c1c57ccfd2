#pragma once

#include "sel/dynamics.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace sel {

/// u = (cos 2pi x1, sin 2pi x1, 0), v = 0: a stationary harmonic map.
SimState equator_stationary(const SpectralGrid& grid);

/// Truncated degree-one bubble of scale `lambda` centred at (1/2, 1/2):
/// polar angle 2 atan(r/lambda), unwound to e3 between r = 0.2 and r = 0.35.
SimState bump_concentrated(const SpectralGrid& grid, double lambda = 0.05);

/// Small smooth data, E(0) close to 0.1.
SimState smooth_small(const SpectralGrid& grid);

/// v = (sin 2pi x2, 0), u = e3.
SimState shear(const SpectralGrid& grid);

/// Taylor-Green vortex v = (sin 2pi x1 cos 2pi x2, -cos 2pi x1 sin 2pi x2), u = e3.
SimState taylor_green(const SpectralGrid& grid);

/// Preset by name; throws std::invalid_argument for an unknown name.
SimState preset_by_name(const std::string& name, const SpectralGrid& grid);
std::vector<std::string> preset_names();

/// Random combination of the real Fourier modes with |k1|, |k2| <= kmax,
/// coefficients N(0, 1) / (1 + |k|^2).
ScalarField random_band_limited(const SpectralGrid& grid, int kmax, std::mt19937_64& rng);

/// normalize(e3 + amplitude * random band-limited vector field).
DirectorField random_unit_field(const SpectralGrid& grid, int kmax, double amplitude,
                                std::mt19937_64& rng);

/// Leray-projected random band-limited velocity scaled by `amplitude`.
VelocityField random_velocity(const SpectralGrid& grid, int kmax, double amplitude,
                              std::mt19937_64& rng);

/// Smooth periodic-in-time director path
///   u(t) = normalize(e3 + amplitude (cos(2 pi t/T) A + sin(2 pi t/T) B))
/// sampled at `samples` uniform times of [0, T).
std::vector<Vec3Field> random_director_path(const SpectralGrid& grid, int kmax,
                                            double amplitude, int samples,
                                            std::mt19937_64& rng);

}  // namespace sel
