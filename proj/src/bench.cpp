#include "micropillar/bench.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include <Eigen/Dense>

#include "micropillar/budget.hpp"

namespace micropillar {

void validate(const TimeSeries& ts) {
    if (!(ts.sample_rate > 0.0)) throw ValidationError("sample_rate must be positive");
    if (ts.samples.empty()) throw ValidationError("time series must not be empty");
}

void validate(const SweepResponse& sweep) {
    if (sweep.frequencies.size() != sweep.response.size()) {
        throw ValidationError("sweep frequency and response lengths must match");
    }
    if (sweep.frequencies.size() < 2) throw ValidationError("sweep needs at least two points");
    for (std::size_t i = 0; i + 1 < sweep.frequencies.size(); ++i) {
        if (!(sweep.frequencies[i] < sweep.frequencies[i + 1])) {
            throw ValidationError("sweep frequency grid must be strictly ascending");
        }
    }
    if (!(sweep.frequencies.front() > 0.0)) {
        throw ValidationError("sweep frequencies must be positive");
    }
}

TimeSeries michelson_signal(const TimeSeries& displacement,
                            const InterferometerParams& params) {
    validate(displacement);
    validate(params);

    const double dt = 1.0 / displacement.sample_rate;
    const double phase_per_meter = 4.0 * pi / params.wavelength;
    const double half_i0 = params.mean_intensity / 2.0;

    std::mt19937_64 rng(params.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const bool with_jitter = params.jitter_rms > 0.0;
    const bool with_noise = params.additive_noise_rms > 0.0;
    const double alpha = std::exp(-dt / params.jitter_correlation_time);
    const double jitter_step = params.jitter_rms * std::sqrt(1.0 - alpha * alpha);

    TimeSeries out;
    out.sample_rate = displacement.sample_rate;
    out.start_time = displacement.start_time;
    out.samples.resize(displacement.samples.size());

    double jitter = with_jitter ? params.jitter_rms * gauss(rng) : 0.0;
    for (std::size_t k = 0; k < displacement.samples.size(); ++k) {
        if (k > 0 && with_jitter) jitter = alpha * jitter + jitter_step * gauss(rng);
        const double phase =
            phase_per_meter * displacement.samples[k] + params.operating_phase + jitter;
        double intensity = half_i0 * (1.0 + params.visibility * std::cos(phase));
        if (with_noise) intensity += params.additive_noise_rms * gauss(rng);
        out.samples[k] = intensity;
    }
    return out;
}

SweepResponse sweep_response(const OscillatorParams& osc, double drive_force,
                             const std::vector<double>& frequency_grid) {
    validate(osc);
    if (!(drive_force > 0.0)) throw ValidationError("drive_force must be positive");

    SweepResponse sweep;
    sweep.frequencies = frequency_grid;
    sweep.response.reserve(frequency_grid.size());
    for (double nu : frequency_grid) {
        sweep.response.push_back(drive_force *
                                 mechanical_susceptibility(osc, 2.0 * pi * nu));
    }
    validate(sweep);
    return sweep;
}

SweepResponse measured_sweep_response(const OscillatorParams& osc,
                                      double drive_force,
                                      const std::vector<double>& frequency_grid,
                                      const InterferometerParams& params,
                                      double measurement_time) {
    validate(params);
    if (!(measurement_time > 0.0)) throw ValidationError("measurement_time must be positive");
    if (params.jitter_rms == 0.0) {
        return sweep_response(osc, drive_force, frequency_grid);
    }
    validate(osc);
    if (!(drive_force > 0.0)) throw ValidationError("drive_force must be positive");

    // Apparent line-center wobble; the window length fixes how many
    // independent wobble samples average into one sweep.
    const double sigma_nu =
        params.jitter_rms / (2.0 * pi * params.jitter_correlation_time);
    const std::size_t draws = std::clamp<std::size_t>(
        static_cast<std::size_t>(measurement_time / (2.0 * params.jitter_correlation_time)),
        4, 20000);

    std::mt19937_64 rng(params.seed);
    std::normal_distribution<double> gauss(0.0, sigma_nu);
    std::vector<double> offsets(draws);
    for (double& d : offsets) d = gauss(rng);

    SweepResponse sweep;
    sweep.frequencies = frequency_grid;
    sweep.response.reserve(frequency_grid.size());
    OscillatorParams wobbled = osc;
    for (double nu : frequency_grid) {
        std::complex<double> mean(0.0, 0.0);
        for (double d : offsets) {
            wobbled.frequency = osc.frequency + d;
            mean += mechanical_susceptibility(wobbled, 2.0 * pi * nu);
        }
        sweep.response.push_back(drive_force * mean / static_cast<double>(draws));
    }
    validate(sweep);
    return sweep;
}

TimeSeries synth_ringdown(const OscillatorParams& osc, double a0,
                          double duration, double sample_rate, double snr,
                          std::uint64_t seed, RingdownMode mode) {
    validate(osc);
    if (!(a0 > 0.0)) throw ValidationError("a0 must be positive");
    if (!(duration > 0.0)) throw ValidationError("duration must be positive");
    if (!(sample_rate > 0.0)) throw ValidationError("sample_rate must be positive");

    const double decay_rate = pi * osc.frequency / osc.quality_factor; // 1/tau
    if (mode == RingdownMode::FullWaveform) {
        if (sample_rate <= 2.0 * osc.frequency) {
            throw ValidationError(
                "sample_rate must exceed twice the carrier frequency for a full-waveform record");
        }
    } else {
        // Zero-span emulation only needs to resolve the envelope.
        if (decay_rate > 0.0 && sample_rate < 10.0 * decay_rate) {
            throw ValidationError("sample_rate too low to resolve the ring-down envelope");
        }
    }

    const std::size_t n = std::max<std::size_t>(
        16, static_cast<std::size_t>(std::llround(duration * sample_rate)));

    TimeSeries ts;
    ts.sample_rate = sample_rate;
    ts.start_time = 0.0;
    ts.samples.resize(n);

    const bool with_noise = snr > 0.0 && std::isfinite(snr);
    const double noise_rms = with_noise ? a0 / snr : 0.0;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    const double omega = 2.0 * pi * osc.frequency;
    for (std::size_t k = 0; k < n; ++k) {
        const double t = static_cast<double>(k) / sample_rate;
        const double envelope = a0 * std::exp(-decay_rate * t);
        double x = mode == RingdownMode::FullWaveform ? envelope * std::cos(omega * t)
                                                      : envelope;
        if (with_noise) x += noise_rms * gauss(rng);
        ts.samples[k] = x;
    }
    return ts;
}

namespace {

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0; // at x = 0
    double sigma_slope = 0.0;
    double sigma_intercept = 0.0;
    double residual_rms = 0.0;
    std::size_t points = 0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    LineFit fit;
    fit.points = x.size();
    if (x.size() < 2) return fit;
    const double n = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) { sx += x[i]; sy += y[i]; }
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx <= 0.0) return fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (fit.intercept + fit.slope * x[i]);
        ss += r * r;
    }
    fit.residual_rms = std::sqrt(ss / n);
    if (x.size() > 2) {
        const double var = ss / (n - 2.0);
        fit.sigma_slope = std::sqrt(var / sxx);
        fit.sigma_intercept = std::sqrt(var * (1.0 / n + mx * mx / sxx));
    }
    return fit;
}

// Envelope samples from non-overlapping windows: local mean removal plus
// RMS, e = sqrt(2 var), which maps window RMS back to carrier amplitude.
struct EnvelopePoint {
    double time = 0.0;
    double value = 0.0;
    double window_mean = 0.0;
};

std::vector<EnvelopePoint> window_envelope(const TimeSeries& ts, std::size_t window) {
    std::vector<EnvelopePoint> points;
    const std::size_t n = ts.samples.size();
    points.reserve(n / window);
    for (std::size_t start = 0; start + window <= n; start += window) {
        double mu = 0.0, ms = 0.0;
        for (std::size_t k = start; k < start + window; ++k) {
            mu += ts.samples[k];
            ms += ts.samples[k] * ts.samples[k];
        }
        mu /= static_cast<double>(window);
        ms /= static_cast<double>(window);
        const double var = std::max(ms - mu * mu, 0.0);
        EnvelopePoint p;
        p.time = ts.time_at(start + (window - 1) / 2);
        p.value = std::sqrt(2.0 * var);
        p.window_mean = mu;
        points.push_back(p);
    }
    return points;
}

std::size_t count_sign_changes(const std::vector<double>& samples, double offset) {
    std::size_t changes = 0;
    int last_sign = 0;
    for (double s : samples) {
        const double v = s - offset;
        const int sign = v > 0.0 ? 1 : (v < 0.0 ? -1 : 0);
        if (sign != 0) {
            if (last_sign != 0 && sign != last_sign) ++changes;
            last_sign = sign;
        }
    }
    return changes;
}

// Hysteresis zero-crossing times of an already envelope-normalized
// carrier; a transition counts only after the signal swings past the
// opposite threshold, which keeps tail noise from inserting crossings.
std::vector<double> crossing_times(const std::vector<double>& y,
                                   const std::vector<double>& t,
                                   double threshold) {
    std::vector<double> times;
    int state = 0;
    std::size_t previous = 0;
    for (std::size_t k = 0; k < y.size(); ++k) {
        const int level = y[k] > threshold ? 1 : (y[k] < -threshold ? -1 : 0);
        if (level == 0 || level == state) continue;
        if (state != 0) {
            // Locate the sign change between the two threshold visits.
            std::size_t a = previous;
            for (std::size_t j = previous; j < k; ++j) {
                if ((y[j] > 0.0) != (y[j + 1] > 0.0)) { a = j; break; }
            }
            const double y0 = y[a], y1 = y[a + 1];
            const double frac = y0 == y1 ? 0.5 : y0 / (y0 - y1);
            times.push_back(t[a] + frac * (t[a + 1] - t[a]));
        }
        state = level;
        previous = k;
    }
    return times;
}

FitResult fit_envelope_only(const TimeSeries& ts, std::optional<double> hint) {
    const std::size_t n = ts.samples.size();
    std::vector<double> t, ln_e;
    t.reserve(n);
    ln_e.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        if (ts.samples[k] > 0.0) {
            t.push_back(ts.time_at(k) - ts.start_time);
            ln_e.push_back(std::log(ts.samples[k]));
        }
    }
    if (t.size() < 8) throw ComputeError("not enough positive envelope samples to fit");

    const LineFit line = fit_line(t, ln_e);
    FitResult result;
    result.method = "log-linear envelope fit (zero-span record)";
    result.amplitude = std::exp(line.intercept);
    result.sigma_amplitude = result.amplitude * line.sigma_intercept;
    if (hint) result.frequency = *hint;

    const double record = t.back() - t.front();
    if (line.slope >= 0.0 || -1.0 / line.slope > 1e4 * record) {
        result.unbounded_q = true;
        result.quality_factor = std::numeric_limits<double>::infinity();
    } else {
        if (!hint) {
            throw ValidationError("frequency hint required for an envelope-only record");
        }
        const double tau = -1.0 / line.slope;
        result.quality_factor = pi * *hint * tau;
        result.sigma_quality = pi * *hint * tau * tau * line.sigma_slope;
    }

    // Residuals in linear units against the fitted exponential.
    double ss = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double model = result.unbounded_q
            ? result.amplitude
            : std::exp(line.intercept + line.slope * (ts.time_at(k) - ts.start_time));
        const double r = ts.samples[k] - model;
        ss += r * r;
    }
    result.residual_rms = std::sqrt(ss / static_cast<double>(n));
    result.low_confidence =
        result.residual_rms > 0.0 && result.amplitude / result.residual_rms < 3.0;
    return result;
}

FitResult fit_full_waveform(const TimeSeries& ts, std::optional<double> hint,
                            std::size_t sign_changes) {
    const std::size_t n = ts.samples.size();
    const double record = static_cast<double>(n - 1) / ts.sample_rate;
    const double nu0 = hint ? *hint
                            : static_cast<double>(sign_changes) / (2.0 * record);
    if (!(nu0 > 0.0)) throw ComputeError("could not estimate a carrier frequency");

    // Window of at least ten carrier periods, but keep at least 8 windows.
    std::size_t window = static_cast<std::size_t>(std::ceil(10.0 * ts.sample_rate / nu0));
    window = std::clamp<std::size_t>(window, 8, std::max<std::size_t>(8, n / 8));

    std::vector<EnvelopePoint> env = window_envelope(ts, window);
    if (env.size() < 4) throw ComputeError("record too short for envelope extraction");

    auto log_fit = [&](double floor) {
        std::vector<double> t, ln_e;
        for (const EnvelopePoint& p : env) {
            if (p.value > floor) {
                t.push_back(p.time - ts.start_time);
                ln_e.push_back(std::log(p.value));
            }
        }
        return fit_line(t, ln_e);
    };

    LineFit line = log_fit(0.0);
    if (line.points < 4) throw ComputeError("envelope vanished; nothing to fit");

    FitResult result;
    result.method =
        "sliding-window RMS envelope + log-linear decay fit + zero-crossing frequency";
    result.amplitude = std::exp(line.intercept);

    const bool unbounded = line.slope >= 0.0 || -1.0 / line.slope > 1e4 * record;

    // Envelope-normalized carrier for crossing detection and the noise floor.
    std::vector<double> y(n), t_all(n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t j = std::min(k / window, env.size() - 1);
        const double tt = ts.time_at(k) - ts.start_time;
        const double envelope = unbounded
            ? result.amplitude
            : std::exp(line.intercept + line.slope * tt);
        y[k] = (ts.samples[k] - env[j].window_mean) / std::max(envelope, 1e-300);
        t_all[k] = tt;
    }

    std::vector<double> times = crossing_times(y, t_all, 0.3);
    double nu_hat = nu0;
    double sigma_nu = 0.0;
    if (times.size() >= 8) {
        std::vector<double> index(times.size());
        std::iota(index.begin(), index.end(), 0.0);
        const LineFit tfit = fit_line(index, times);
        if (tfit.slope > 0.0) {
            nu_hat = 1.0 / (2.0 * tfit.slope);
            sigma_nu = nu_hat * (tfit.sigma_slope / tfit.slope);
        }
    } else if (!hint) {
        throw ComputeError("too few zero crossings to estimate the carrier frequency");
    }
    result.frequency = nu_hat;
    result.sigma_frequency = sigma_nu;

    // Noise floor from the residual of a per-window quadrature fit.
    const double w_hat = 2.0 * pi * nu_hat;
    double noise_ss = 0.0;
    std::size_t noise_n = 0;
    for (std::size_t j = 0; j < env.size(); ++j) {
        const std::size_t start = j * window;
        double cc = 0.0, cs = 0.0, ss_ = 0.0, yc = 0.0, ys = 0.0;
        for (std::size_t k = start; k < start + window; ++k) {
            const double c = std::cos(w_hat * t_all[k]);
            const double s = std::sin(w_hat * t_all[k]);
            const double v = ts.samples[k] - env[j].window_mean;
            cc += c * c; cs += c * s; ss_ += s * s;
            yc += v * c; ys += v * s;
        }
        const double det = cc * ss_ - cs * cs;
        if (std::abs(det) < 1e-12) continue;
        const double a = (yc * ss_ - ys * cs) / det;
        const double b = (ys * cc - yc * cs) / det;
        for (std::size_t k = start; k < start + window; ++k) {
            const double v = ts.samples[k] - env[j].window_mean;
            const double r = v - a * std::cos(w_hat * t_all[k]) - b * std::sin(w_hat * t_all[k]);
            noise_ss += r * r;
            ++noise_n;
        }
    }
    const double noise_rms = noise_n > 0 ? std::sqrt(noise_ss / noise_n) : 0.0;

    // Refit the decay ignoring windows that fell to the noise floor.
    if (!unbounded && noise_rms > 0.0) {
        const LineFit refit = log_fit(5.0 * noise_rms);
        if (refit.points >= 8 && refit.points < line.points && refit.slope < 0.0) {
            line = refit;
            result.amplitude = std::exp(line.intercept);
        }
    }

    if (unbounded || line.slope >= 0.0 || -1.0 / line.slope > 1e4 * record) {
        result.unbounded_q = true;
        result.quality_factor = std::numeric_limits<double>::infinity();
    } else {
        const double tau = -1.0 / line.slope;
        result.quality_factor = pi * nu_hat * tau;
        result.sigma_quality = pi * nu_hat * tau * tau * line.sigma_slope;
    }
    result.sigma_amplitude = result.amplitude * line.sigma_intercept;

    double env_ss = 0.0;
    for (const EnvelopePoint& p : env) {
        const double model = result.unbounded_q
            ? result.amplitude
            : std::exp(line.intercept + line.slope * (p.time - ts.start_time));
        env_ss += (p.value - model) * (p.value - model);
    }
    result.residual_rms = std::sqrt(env_ss / static_cast<double>(env.size()));
    result.low_confidence = noise_rms > 0.0 && result.amplitude / noise_rms < 3.0;
    return result;
}

} // namespace

FitResult fit_ringdown(const TimeSeries& ts, std::optional<double> frequency_hint) {
    validate(ts);
    const std::size_t n = ts.samples.size();
    if (n < 16) throw ValidationError("ring-down record too short (need at least 16 samples)");
    if (frequency_hint && !(*frequency_hint > 0.0)) {
        throw ValidationError("frequency hint must be positive");
    }

    const double mean =
        std::accumulate(ts.samples.begin(), ts.samples.end(), 0.0) / static_cast<double>(n);
    const std::size_t changes = count_sign_changes(ts.samples, mean);

    bool waveform;
    if (frequency_hint && ts.sample_rate > 2.0 * *frequency_hint) {
        waveform = true;
    } else {
        waveform = changes >= std::max<std::size_t>(32, n / 10000);
    }
    return waveform ? fit_full_waveform(ts, frequency_hint, changes)
                    : fit_envelope_only(ts, frequency_hint);
}

namespace {

// Compact Levenberg-Marquardt with a forward-difference Jacobian; the
// scales vector sets the difference steps and keeps parameters O(1).
struct LmOutcome {
    Eigen::VectorXd params;
    Eigen::MatrixXd covariance;
    double cost = 0.0;
    bool converged = false;
};

template <class Residual>
LmOutcome lm_fit(Residual&& residual, Eigen::VectorXd p,
                 const Eigen::VectorXd& scales, int max_iterations = 300) {
    const int n_params = static_cast<int>(p.size());
    Eigen::VectorXd r = residual(p);
    double cost = 0.5 * r.squaredNorm();
    if (!std::isfinite(cost)) throw ComputeError("fit initialization is not finite");

    double lambda = 1e-3;
    int stagnant = 0;
    Eigen::MatrixXd jacobian(r.size(), n_params);
    LmOutcome out;
    out.converged = true; // cleared only when the iteration budget runs out

    int iter = 0;
    for (; iter < max_iterations && stagnant < 3; ++iter) {
        for (int j = 0; j < n_params; ++j) {
            const double h = 1e-7 * std::max(scales[j], 1e-12);
            Eigen::VectorXd pj = p;
            pj[j] += h;
            jacobian.col(j) = (residual(pj) - r) / h;
        }
        const Eigen::MatrixXd jtj = jacobian.transpose() * jacobian;
        const Eigen::VectorXd g = jacobian.transpose() * r;

        bool stepped = false;
        while (lambda <= 1e14) {
            Eigen::MatrixXd damped = jtj;
            damped.diagonal() += lambda * jtj.diagonal().cwiseMax(1e-12);
            const Eigen::VectorXd delta = damped.ldlt().solve(-g);
            const Eigen::VectorXd candidate = p + delta;
            const Eigen::VectorXd rc = residual(candidate);
            const double cost_c = 0.5 * rc.squaredNorm();
            if (std::isfinite(cost_c) && cost_c < cost) {
                stagnant = cost - cost_c <= 1e-12 * std::max(cost, 1e-300) ? stagnant + 1 : 0;
                p = candidate;
                r = rc;
                cost = cost_c;
                lambda = std::max(lambda / 3.0, 1e-12);
                stepped = true;
                break;
            }
            lambda *= 10.0;
        }
        if (!stepped) break; // damping exhausted: local minimum reached
    }
    if (iter == max_iterations) out.converged = false;

    out.params = p;
    out.cost = cost;
    const double dof = static_cast<double>(r.size()) - n_params;
    const double variance = dof > 0 ? r.squaredNorm() / dof : 0.0;
    const Eigen::MatrixXd jtj = jacobian.transpose() * jacobian;
    out.covariance = variance * jtj.completeOrthogonalDecomposition().pseudoInverse();
    return out;
}

double median_of(std::vector<double> values) {
    if (values.empty()) return 0.0;
    std::nth_element(values.begin(), values.begin() + values.size() / 2, values.end());
    return values[values.size() / 2];
}

} // namespace

FitResult fit_lorentzian(const SweepResponse& sweep,
                         std::optional<std::complex<double>> background_hint) {
    validate(sweep);
    const std::size_t n = sweep.frequencies.size();
    if (n < 8) throw ValidationError("sweep fit needs at least 8 points");

    // Normalize power to a unit peak so every parameter is O(1).
    std::vector<double> power(n);
    double y_max = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        power[i] = std::norm(sweep.response[i]);
        y_max = std::max(y_max, power[i]);
    }
    if (!(y_max > 0.0)) throw ComputeError("sweep response is identically zero");
    const double amp_scale = std::sqrt(y_max);

    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = power[i] / y_max;

    const std::size_t edge = std::max<std::size_t>(2, n / 20);
    std::vector<double> edge_values;
    std::complex<double> edge_mean(0.0, 0.0);
    for (std::size_t i = 0; i < edge; ++i) {
        edge_values.push_back(y[i]);
        edge_values.push_back(y[n - 1 - i]);
        edge_mean += sweep.response[i] / amp_scale;
        edge_mean += sweep.response[n - 1 - i] / amp_scale;
    }
    edge_mean /= static_cast<double>(2 * edge);
    const double edge_level = median_of(edge_values);

    // Noise scale from first differences away from the peak.
    std::vector<double> diffs;
    for (std::size_t i = 0; i + 1 < edge; ++i) {
        diffs.push_back(y[i + 1] - y[i]);
        diffs.push_back(y[n - 1 - i] - y[n - 2 - i]);
    }
    double noise = 0.0;
    for (double d : diffs) noise += d * d;
    noise = diffs.empty() ? 0.0 : std::sqrt(noise / diffs.size() / 2.0);

    const std::size_t i_peak =
        static_cast<std::size_t>(std::max_element(y.begin(), y.end()) - y.begin());
    const double prominence = y[i_peak] - edge_level;
    if (prominence < std::max(3.0 * noise, 1e-12)) {
        throw ComputeError("no resolvable peak: prominence below 3x the residual scale");
    }

    // Half-power width around the peak for the initial Q.
    const double level = edge_level + prominence / 2.0;
    double left = sweep.frequencies.front(), right = sweep.frequencies.back();
    for (std::size_t i = i_peak; i-- > 0;) {
        if (y[i] < level) {
            const double f = (level - y[i]) / (y[i + 1] - y[i]);
            left = sweep.frequencies[i] + f * (sweep.frequencies[i + 1] - sweep.frequencies[i]);
            break;
        }
    }
    for (std::size_t i = i_peak + 1; i < n; ++i) {
        if (y[i] < level) {
            const double f = (y[i - 1] - level) / (y[i - 1] - y[i]);
            right = sweep.frequencies[i - 1] + f * (sweep.frequencies[i] - sweep.frequencies[i - 1]);
            break;
        }
    }
    const double width0 = std::max(right - left,
                                   (sweep.frequencies.back() - sweep.frequencies.front()) / (2.0 * n));
    const double span = sweep.frequencies.back() - sweep.frequencies.front();
    if (span < 3.0 * width0) {
        throw ValidationError("frequency grid must span at least 3 linewidths around the peak");
    }

    const double nu_peak = sweep.frequencies[i_peak];
    const double q0 = std::max(nu_peak / width0, 2.0);
    std::complex<double> c0 = background_hint ? *background_hint / amp_scale : edge_mean;
    const double a0 = std::max(std::abs(std::sqrt(y[i_peak]) - std::abs(c0)), 0.05);

    // p = (nu0 offset / width0, log Q/Q0 surrogate via ratio, amplitude, Re c, Im c)
    Eigen::VectorXd p(5), scales(5);
    p << nu_peak, q0, a0, c0.real(), c0.imag();
    scales << width0, q0, std::max(a0, 0.1), 0.3, 0.3;

    const std::vector<double>& grid = sweep.frequencies;
    auto residual = [&](const Eigen::VectorXd& q) {
        Eigen::VectorXd r(n);
        const double nu0 = q[0], quality = q[1], a = q[2];
        const std::complex<double> c(q[3], q[4]);
        if (!(quality > 0.5) || !(nu0 > 0.0)) {
            r.setConstant(std::numeric_limits<double>::infinity());
            return r;
        }
        const std::complex<double> peak_denom(0.0, nu0 * nu0 / quality);
        const double peak_mag = std::abs(peak_denom);
        for (std::size_t i = 0; i < n; ++i) {
            const std::complex<double> denom(nu0 * nu0 - grid[i] * grid[i],
                                             grid[i] * nu0 / quality);
            const std::complex<double> shape = peak_mag / denom;
            r[static_cast<Eigen::Index>(i)] = std::norm(a * shape + c) - y[i];
        }
        return r;
    };

    const LmOutcome lm = lm_fit(residual, p, scales);
    if (!lm.converged) throw ComputeError("lorentzian fit did not converge");

    FitResult result;
    result.method = "nonlinear least squares of |a chi + c|^2 with complex background";
    result.frequency = lm.params[0];
    result.quality_factor = lm.params[1];
    result.amplitude = std::abs(lm.params[2]) * amp_scale;
    result.background = std::complex<double>(lm.params[3], lm.params[4]) * amp_scale;
    result.residual_rms = std::sqrt(2.0 * lm.cost / static_cast<double>(n)) * y_max;
    result.sigma_frequency = std::sqrt(std::max(lm.covariance(0, 0), 0.0));
    result.sigma_quality = std::sqrt(std::max(lm.covariance(1, 1), 0.0));
    result.sigma_amplitude = std::sqrt(std::max(lm.covariance(2, 2), 0.0)) * amp_scale;
    result.low_confidence = !lm.converged;
    return result;
}

} // namespace micropillar
