#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "loggap/errors.hpp"
#include "loggap/rng.hpp"
#include "loggap/well.hpp"

namespace loggap {

/// Generator for a five-channel well with shared smooth structure. The
/// channels play the usual roles: GR is the target and is a linear function
/// of latent signals the other channels carry; SP gets a slow drift (food
/// for the detrender); ILD is exponentiated (food for log1p); GR gets its
/// own small drift that no predictor carries, which is what the shift
/// correction exists to absorb.
struct SyntheticConfig {
    std::size_t length = 20000;
    double depth_start = 4000.0;
    double step = 0.5;                                    // feet
    std::size_t harmonics = 8;                            // sinusoids per latent
    double min_wavelength = 40.0;                         // in samples
    double max_wavelength = 2000.0;
    std::vector<std::vector<double>> mixing{              // channel x latent loadings
        {0.7, 0.5, 0.1},                                  // GR
        {0.9, 0.2, 0.1},                                  // RHOB
        {0.1, 0.9, 0.2},                                  // SP
        {0.5, 0.3, 0.7},                                  // ILD
        {0.6, 0.4, 0.5},                                  // DT
    };
    double noise_std = 0.05;   // white noise relative to the unit-variance latent mix
    double sp_trend = 15.0;    // SP drift amplitude, mV
    double gr_trend = 8.0;     // GR drift amplitude, API units
    std::uint64_t seed = 42;
};

inline WellLog synthesize_well(const SyntheticConfig& config = {}) {
    if (config.length < 1000) throw std::invalid_argument("synthetic well length must be >= 1000");
    if (config.noise_std < 0.0) throw std::invalid_argument("noise_std must be >= 0");
    if (config.mixing.size() != 5) throw std::invalid_argument("mixing matrix must have 5 rows");
    const std::size_t latent_count = config.mixing.empty() ? 0 : config.mixing[0].size();
    for (const auto& row : config.mixing)
        if (row.size() != latent_count) throw std::invalid_argument("ragged mixing matrix");

    Rng rng(hash_mix(config.seed, 0x73796e7468ull));
    const std::size_t n = config.length;

    // unit-variance latents: sums of random-phase sinusoids with log-uniform
    // wavelengths, so the series are smooth but busy at several scales
    std::vector<std::vector<double>> latents(latent_count, std::vector<double>(n, 0.0));
    const double log_lo = std::log(config.min_wavelength);
    const double log_hi = std::log(config.max_wavelength);
    for (auto& latent : latents) {
        double variance = 0.0;
        for (std::size_t h = 0; h < config.harmonics; ++h) {
            const double wavelength = std::exp(rng.uniform(log_lo, log_hi));
            const double omega = 2.0 * std::numbers::pi / wavelength;
            const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
            const double amplitude = 1.0 / std::sqrt(1.0 + static_cast<double>(h));
            for (std::size_t i = 0; i < n; ++i)
                latent[i] += amplitude * std::sin(omega * static_cast<double>(i) + phase);
            variance += amplitude * amplitude / 2.0;
        }
        const double inv_std = variance > 0.0 ? 1.0 / std::sqrt(variance) : 1.0;
        for (double& v : latent) v *= inv_std;
    }

    auto mixed = [&](std::size_t channel, std::size_t i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < latent_count; ++j)
            acc += config.mixing[channel][j] * latents[j][i];
        return acc;
    };

    const double sp_phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const double gr_phase = rng.uniform(0.0, 2.0 * std::numbers::pi);

    WellLog well;
    well.well_id = "SYNTHETIC-" + std::to_string(config.seed);
    well.step = config.step;
    well.depths.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        well.depths[i] = config.depth_start + config.step * static_cast<double>(i);

    Curve gr{"GR", "GAPI", std::vector<double>(n)};
    Curve rhob{"RHOB", "G/C3", std::vector<double>(n)};
    Curve sp{"SP", "MV", std::vector<double>(n)};
    Curve ild{"ILD", "OHMM", std::vector<double>(n)};
    Curve dt{"DT", "US/F", std::vector<double>(n)};

    for (std::size_t i = 0; i < n; ++i) {
        const double u = static_cast<double>(i) / static_cast<double>(n);
        // drifts live well below the default detrend cutoff of 5 cycles/well
        const double sp_drift = std::sin(2.0 * std::numbers::pi * 1.3 * u + sp_phase) + 0.8 * (u - 0.5);
        const double gr_drift = std::sin(2.0 * std::numbers::pi * 2.2 * u + gr_phase);

        gr.values[i] = 75.0 + 25.0 * (mixed(0, i) + config.noise_std * rng.normal()) +
                       config.gr_trend * gr_drift;
        rhob.values[i] = 2.45 + 0.15 * (mixed(1, i) + config.noise_std * rng.normal());
        sp.values[i] = -50.0 + 12.0 * (mixed(2, i) + config.noise_std * rng.normal()) +
                       config.sp_trend * sp_drift;
        ild.values[i] = 8.0 * std::exp(0.75 * (mixed(3, i) + config.noise_std * rng.normal()));
        dt.values[i] = 90.0 + 18.0 * (mixed(4, i) + config.noise_std * rng.normal());
    }

    well.curves = {std::move(gr), std::move(rhob), std::move(sp), std::move(ild), std::move(dt)};
    return well;
}

}  // namespace loggap
