#include "hklab/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <thread>

#include "hklab/errors.hpp"
#include "hklab/rng.hpp"
#include "hklab/stats.hpp"

namespace hklab {

ExponentFit fit_exponent(const HeatKernelSeries& s, double t_lo, double t_hi) {
    if (!(t_lo > 0.0) || !(t_hi > t_lo))
        throw ValidationError("fit_exponent: need 0 < t_lo < t_hi");
    std::vector<double> lx, ly;
    for (const auto& p : s.points) {
        if (p.time < t_lo * (1.0 - 1e-12) || p.time > t_hi * (1.0 + 1e-12)) continue;
        if (!(p.value > 0.0))
            throw ValidationError("fit_exponent: non-positive value in window at t=" +
                                  std::to_string(p.time));
        lx.push_back(std::log(p.time));
        ly.push_back(-std::log(p.value));
    }
    if (lx.size() < 8)
        throw ValidationError("fit_exponent: fewer than 8 points in window");
    const LineFit f = least_squares(lx, ly);
    ExponentFit out;
    out.slope = f.slope;
    out.intercept = f.intercept;
    out.slope_stderr = f.slope_stderr;
    out.window_lo = t_lo;
    out.window_hi = t_hi;
    out.n_points = static_cast<int>(lx.size());
    out.residuals.reserve(lx.size());
    for (std::size_t i = 0; i < lx.size(); ++i)
        out.residuals.push_back(ly[i] - (f.slope * lx[i] + f.intercept));
    return out;
}

OscillationStats oscillation_profile(const HeatKernelSeries& s, double theta) {
    std::vector<double> st, q;  // log t, normalized value
    for (const auto& p : s.points) {
        if (!(p.time > 0.0) || !(p.value > 0.0)) continue;
        st.push_back(std::log(p.time));
        q.push_back(std::pow(p.time, theta) * p.value);
    }
    if (st.size() < 16 || st.back() - st.front() < 2.0 * std::log(10.0))
        throw ValidationError("oscillation_profile: series must span >= 2 decades");

    OscillationStats out;
    out.theta = theta;

    // per-decade and overall max/min of the normalized series
    const double ln10 = std::log(10.0);
    double all_max = 0.0, all_min = std::numeric_limits<double>::infinity();
    for (double d0 = st.front(); d0 + ln10 <= st.back() + 1e-12; d0 += ln10) {
        double mx = 0.0, mn = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < st.size(); ++i) {
            if (st[i] < d0 - 1e-12 || st[i] > d0 + ln10 + 1e-12) continue;
            mx = std::max(mx, q[i]);
            mn = std::min(mn, q[i]);
        }
        if (mn < std::numeric_limits<double>::infinity() && mn > 0.0)
            out.per_decade.push_back({std::exp(d0), mx / mn});
    }
    for (double v : q) {
        all_max = std::max(all_max, v);
        all_min = std::min(all_min, v);
    }
    out.max_over_min = all_max / all_min;

    // detrended log-normalized series on the log-time axis
    std::vector<double> y(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) y[i] = std::log(q[i]);
    const LineFit trend = least_squares(st, y);
    std::vector<double> r(q.size());
    double rms = 0.0, yscale = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
        r[i] = y[i] - (trend.slope * st[i] + trend.intercept);
        rms += r[i] * r[i];
        yscale = std::max(yscale, std::abs(y[i]));
    }
    rms = std::sqrt(rms / static_cast<double>(r.size()));
    if (rms < 1e-10 * std::max(1.0, yscale)) {
        // numerically a pure power law: nothing to detect
        out.peak_detected = false;
        return out;
    }

    // Hann-windowed periodogram, evaluated on an 8x oversampled frequency
    // grid between one cycle per span and the Nyquist of the median spacing.
    const double span = st.back() - st.front();
    std::vector<double> dsteps;
    for (std::size_t i = 1; i < st.size(); ++i) dsteps.push_back(st[i] - st[i - 1]);
    std::sort(dsteps.begin(), dsteps.end());
    const double dt_med = dsteps[dsteps.size() / 2];
    const double omega_min = 2.0 * M_PI / span;
    const double omega_max = M_PI / dt_med;

    double wsum = 0.0;
    std::vector<double> hann(st.size());
    for (std::size_t i = 0; i < st.size(); ++i) {
        const double u = (st[i] - st.front()) / span;
        hann[i] = 0.5 - 0.5 * std::cos(2.0 * M_PI * u);
        wsum += hann[i];
    }

    std::vector<double> power;
    std::vector<double> omegas;
    for (double omega = omega_min; omega <= omega_max; omega += omega_min / 8.0) {
        std::complex<double> acc(0.0, 0.0);
        for (std::size_t i = 0; i < st.size(); ++i)
            acc += hann[i] * r[i] * std::exp(std::complex<double>(0.0, -omega * st[i]));
        power.push_back(std::norm(acc) / (wsum * wsum));
        omegas.push_back(omega);
    }
    std::size_t peak = 0;
    for (std::size_t i = 1; i < power.size(); ++i)
        if (power[i] > power[peak]) peak = i;
    std::vector<double> sorted_power = power;
    std::sort(sorted_power.begin(), sorted_power.end());
    out.noise_floor = sorted_power[sorted_power.size() / 2];
    out.peak_power = power[peak];
    out.dominant_log_period = 2.0 * M_PI / omegas[peak];
    out.peak_detected = out.peak_power > 10.0 * std::max(out.noise_floor, 1e-300);
    return out;
}

std::uint64_t member_seed(std::uint64_t master_seed, int index) {
    return mix_seed(master_seed, 0x6d656d62ULL + static_cast<std::uint64_t>(index));
}

namespace {

// Runs the family over M members (optionally threaded), collecting values on
// the fixed grid. Results are stored per index, so the reduction below is
// independent of the parallel split.
std::vector<std::vector<double>> collect_members(const SeriesSampler& family,
                                                 const std::vector<double>& t_grid, int M,
                                                 std::uint64_t master_seed, int jobs) {
    std::vector<std::vector<double>> values(static_cast<std::size_t>(M));
    std::vector<std::string> failures(static_cast<std::size_t>(M));

    auto run_one = [&](int i) {
        const std::uint64_t seed = member_seed(master_seed, i);
        try {
            const HeatKernelSeries s = family(seed);
            if (s.points.size() != t_grid.size())
                throw Error("family returned a series on the wrong grid");
            std::vector<double> v(t_grid.size());
            for (std::size_t j = 0; j < t_grid.size(); ++j) {
                if (std::abs(s.points[j].time - t_grid[j]) >
                    1e-9 * std::max(1.0, t_grid[j]))
                    throw Error("family returned a series on the wrong grid");
                v[j] = s.points[j].value;
            }
            values[static_cast<std::size_t>(i)] = std::move(v);
        } catch (const std::exception& e) {
            failures[static_cast<std::size_t>(i)] =
                std::string(e.what()) + " [environment seed=" + std::to_string(seed) + "]";
        }
    };

    if (jobs <= 1) {
        for (int i = 0; i < M; ++i) run_one(i);
    } else {
        std::atomic<int> cursor{0};
        auto worker = [&] {
            for (int i = cursor.fetch_add(1); i < M; i = cursor.fetch_add(1)) run_one(i);
        };
        std::vector<std::thread> pool;
        for (int w = 0; w < jobs; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    for (int i = 0; i < M; ++i)
        if (!failures[static_cast<std::size_t>(i)].empty())
            throw Error("annealed family member " + std::to_string(i) +
                        " failed: " + failures[static_cast<std::size_t>(i)]);
    return values;
}

}  // namespace

MeanSeries annealed_kernel(const SeriesSampler& family, const std::vector<double>& t_grid,
                           int M, std::uint64_t master_seed, int jobs) {
    if (M < 20) throw ValidationError("annealed_kernel: need M >= 20");
    if (t_grid.empty()) throw ValidationError("annealed_kernel: empty grid");
    const auto values = collect_members(family, t_grid, M, master_seed, jobs);

    MeanSeries out;
    out.times = t_grid;
    out.members = M;
    out.mean.resize(t_grid.size());
    out.ci_half.resize(t_grid.size());
    out.member_min.assign(t_grid.size(), std::numeric_limits<double>::infinity());
    out.member_max.assign(t_grid.size(), -std::numeric_limits<double>::infinity());
    for (std::size_t j = 0; j < t_grid.size(); ++j) {
        double sum = 0.0;
        for (int i = 0; i < M; ++i) {
            const double v = values[static_cast<std::size_t>(i)][j];
            sum += v;
            out.member_min[j] = std::min(out.member_min[j], v);
            out.member_max[j] = std::max(out.member_max[j], v);
        }
        const double mean = sum / M;
        double ss = 0.0;
        for (int i = 0; i < M; ++i) {
            const double d = values[static_cast<std::size_t>(i)][j] - mean;
            ss += d * d;
        }
        out.mean[j] = mean;
        out.ci_half[j] =
            M > 1 ? 1.959964 * std::sqrt(ss / (M - 1) / static_cast<double>(M)) : 0.0;
    }
    return out;
}

QuantileBand quantile_band(const SeriesSampler& family, const std::vector<double>& t_grid,
                           int M, std::uint64_t master_seed,
                           const std::function<double(double)>& normalizer, int jobs) {
    if (M < 100) throw ValidationError("quantile_band: need M >= 100");
    if (t_grid.empty()) throw ValidationError("quantile_band: empty grid");
    const auto values = collect_members(family, t_grid, M, master_seed, jobs);

    QuantileBand out;
    out.times = t_grid;
    out.members = M;
    for (std::size_t j = 0; j < t_grid.size(); ++j) {
        std::vector<double> column(static_cast<std::size_t>(M));
        const double norm = normalizer ? normalizer(t_grid[j]) : 1.0;
        if (!(norm > 0.0)) throw ValidationError("quantile_band: non-positive normalizer");
        for (int i = 0; i < M; ++i)
            column[static_cast<std::size_t>(i)] =
                values[static_cast<std::size_t>(i)][j] / norm;
        std::sort(column.begin(), column.end());
        out.q05.push_back(sorted_quantile(column, 0.05));
        out.q25.push_back(sorted_quantile(column, 0.25));
        out.q50.push_back(sorted_quantile(column, 0.50));
        out.q75.push_back(sorted_quantile(column, 0.75));
        out.q95.push_back(sorted_quantile(column, 0.95));
    }
    return out;
}

LocalCltResult local_clt_error(const TrapEnvironment& env, double lambda, double x0,
                               double t_lo, double t_hi, int t_points, double exit_tol) {
    if (!(lambda > 0.0)) throw ValidationError("local_clt_error: lambda must be positive");
    if (x0 < 0.0) throw ValidationError("local_clt_error: x0 must be >= 0");
    if (!(t_lo > 0.0) || !(t_hi >= t_lo))
        throw ValidationError("local_clt_error: bad time interval");
    if (t_points < 1) throw ValidationError("local_clt_error: t_points >= 1");
    if (t_points % 2 == 0) ++t_points;  // keep an exact midpoint

    std::vector<double> macro_times(static_cast<std::size_t>(t_points));
    for (int k = 0; k < t_points; ++k)
        macro_times[static_cast<std::size_t>(k)] =
            t_points == 1 ? t_lo
                          : t_lo + (t_hi - t_lo) * static_cast<double>(k) / (t_points - 1);

    std::vector<double> chain_times;
    chain_times.reserve(macro_times.size());
    for (double t : macro_times) chain_times.push_back(lambda * lambda * t);

    const auto z_max = static_cast<std::int64_t>(std::floor(lambda * x0));
    std::vector<std::int64_t> targets;
    for (std::int64_t z = -z_max; z <= z_max; ++z) targets.push_back(z);

    const BtmProfile prof = btm_profile(env, chain_times, targets, exit_tol);

    const std::size_t mid = macro_times.size() / 2;
    const std::size_t origin = static_cast<std::size_t>(z_max);  // index of z = 0
    const double p_mid = prof.values[origin][mid];
    if (!(p_mid > 0.0)) throw Error("local_clt_error: vanishing on-diagonal value");
    const double t_mid = macro_times[mid];
    const double sigma2 =
        1.0 / (2.0 * M_PI * t_mid * lambda * lambda * p_mid * p_mid);

    double sup = 0.0;
    for (std::size_t j = 0; j < macro_times.size(); ++j) {
        const double t = macro_times[j];
        for (std::size_t q = 0; q < targets.size(); ++q) {
            const double x = static_cast<double>(targets[q]) / lambda;
            const double gauss = std::exp(-x * x / (2.0 * sigma2 * t)) /
                                 std::sqrt(2.0 * M_PI * sigma2 * t);
            sup = std::max(sup, std::abs(lambda * prof.values[q][j] - gauss));
        }
    }

    LocalCltResult out;
    out.lambda = lambda;
    out.sigma2 = sigma2;
    out.sup_error = sup;
    out.t_mid = t_mid;
    out.window = prof.window;
    return out;
}

}  // namespace hklab
