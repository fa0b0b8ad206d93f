#ifndef MICROPILLAR_BENCH_HPP
#define MICROPILLAR_BENCH_HPP

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "micropillar/types.hpp"

// Michelson characterization bench: photodiode signal synthesis, driven
// sweep responses, ring-down records, and the (nu, Q) estimators.
// Generators are pure functions of their seed.

namespace micropillar {

struct TimeSeries {
    double sample_rate = 0.0; // Hz
    double start_time = 0.0;  // s
    std::vector<double> samples;

    double time_at(std::size_t index) const {
        return start_time + static_cast<double>(index) / sample_rate;
    }
};

void validate(const TimeSeries& ts);

struct SweepResponse {
    std::vector<double> frequencies;             // Hz, strictly ascending
    std::vector<std::complex<double>> response;  // m per unit drive force
};

void validate(const SweepResponse& sweep);

struct FitResult {
    double frequency = 0.0;      // Hz
    double quality_factor = 0.0; // dimensionless
    double amplitude = 0.0;      // signal units
    double residual_rms = 0.0;   // signal units
    double sigma_frequency = 0.0;
    double sigma_quality = 0.0;
    double sigma_amplitude = 0.0;
    bool unbounded_q = false;    // non-decaying envelope
    bool low_confidence = false; // estimated SNR below 3
    std::complex<double> background; // fitted complex background (sweep fits)
    std::string method;          // estimator description for reports
};

// Photodiode intensity of the Michelson bench for a displacement record
// x(t) in meters:
//   I(t) = I0/2 (1 + V cos(4 pi x/lambda + phi0 + j(t))) + n(t)
// with j(t) exponentially correlated phase jitter and n(t) white noise.
TimeSeries michelson_signal(const TimeSeries& displacement,
                            const InterferometerParams& params);

// Driven response x(nu) = F0 chi(2 pi nu) on the given grid.
SweepResponse sweep_response(const OscillatorParams& osc, double drive_force,
                             const std::vector<double>& frequency_grid);

// Sweep as seen through the jittering interferometer: the line center is
// smeared by an apparent frequency wobble of rms
//   sigma_nu = jitter_rms / (2 pi jitter_correlation_time),
// vector-averaged over the measurement window (the window length sets the
// number of independent wobble samples).  Ring-down records are immune to
// this mechanism, which is why the paper prefers them.
SweepResponse measured_sweep_response(const OscillatorParams& osc,
                                      double drive_force,
                                      const std::vector<double>& frequency_grid,
                                      const InterferometerParams& params,
                                      double measurement_time);

enum class RingdownMode { FullWaveform, EnvelopeOnly };

// x(t) = a0 exp(-pi nu t / Q) cos(2 pi nu t) plus white noise of rms
// a0/snr (snr <= 0 disables the noise).  EnvelopeOnly emulates a
// zero-span spectrum analyzer and records the envelope alone, allowing
// sample rates far below the carrier.
TimeSeries synth_ringdown(const OscillatorParams& osc, double a0,
                          double duration, double sample_rate, double snr,
                          std::uint64_t seed,
                          RingdownMode mode = RingdownMode::FullWaveform);

// Ring-down estimator: sliding-window RMS envelope (window >= 10 carrier
// periods), least-squares line through the log envelope, Q = pi nu tau;
// nu from hysteresis zero-crossing counting or the hint.
FitResult fit_ringdown(const TimeSeries& ts,
                       std::optional<double> frequency_hint = std::nullopt);

// Nonlinear least squares of |a chi(nu) + c|^2 against |data|^2 with a
// complex background c; initialized from the peak location and
// half-power width.
FitResult fit_lorentzian(const SweepResponse& sweep,
                         std::optional<std::complex<double>> background_hint =
                             std::nullopt);

} // namespace micropillar

#endif
