#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <vector>

#include "bdris/beamforming.hpp"
#include "bdris/channels.hpp"
#include "bdris/config.hpp"
#include "bdris/types.hpp"

namespace bdris {

// Right-continuous step CDF over sorted samples.
class EmpiricalCdf {
  public:
    explicit EmpiricalCdf(std::vector<double> samples) : s_(std::move(samples)) {
        std::sort(s_.begin(), s_.end());
    }

    double operator()(double x) const {
        const auto it = std::upper_bound(s_.begin(), s_.end(), x);
        return static_cast<double>(it - s_.begin()) / static_cast<double>(s_.size());
    }

    const std::vector<double>& samples() const { return s_; }
    std::size_t size() const { return s_.size(); }

  private:
    std::vector<double> s_;
};

// One-sample Kolmogorov-Smirnov distance against an analytic CDF, both
// one-sided gaps evaluated at every sample point.
inline double ks_distance(const EmpiricalCdf& emp, const std::function<double(double)>& cdf) {
    const auto& s = emp.samples();
    if (s.size() < 100) throw InvalidParameter("ks_distance: need >= 100 samples");
    const double n = static_cast<double>(s.size());
    double d = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double f = cdf(s[i]);
        d = std::max(d, (static_cast<double>(i) + 1.0) / n - f);
        d = std::max(d, f - static_cast<double>(i) / n);
    }
    return d;
}

// Two-sample KS distance (ties advance both sides before the gap is taken).
inline double ks_distance_two_sample(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        const double v = std::min(a[i], b[j]);
        while (i < a.size() && a[i] == v) ++i;
        while (j < b.size() && b[j] == v) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

// Per-trial metric samples of the optimal-design system: the maximum radar SNR
// and the K ZF SINRs. Trial t draws from substream(seed, t), so any split of
// the trial range reproduces the same multiset of samples.
struct MetricSamples {
    VectorXd radar_snr;        // trials
    MatrixXd zf_sinr;          // trials x K
    std::int64_t degenerate_resamples = 0;
    std::uint64_t seed = 0;
};

inline MetricSamples simulate_metrics(const SystemConfig& cfg, const Geometry& geom,
                                      std::int64_t trials, std::uint64_t seed,
                                      std::int64_t trial_offset = 0) {
    if (trials < 1) throw InvalidParameter("simulate_metrics: trials must be >= 1");
    const DerivedGains gains = derive_gains(cfg, geom);
    MetricSamples out;
    out.seed = seed;
    out.radar_snr.resize(trials);
    out.zf_sinr.resize(trials, cfg.K);

    const int M = cfg.M, K = cfg.K, N = cfg.N;
    for (std::int64_t t = 0; t < trials; ++t) {
        RngStream rng = RngStream::substream(seed, static_cast<std::uint64_t>(t + trial_offset));
        for (int attempt = 0;; ++attempt) {
            const ChannelSet ch = sample_channels(M, K, N, rng);
            // thin SVD: only singular values and V enter the optimal design
            Eigen::JacobiSVD<MatrixXcd> svd(ch.G, Eigen::ComputeThinV);
            const VectorXd sigma = svd.singularValues().array().square();
            if (sigma[M - 1] < 1e-12 * sigma[0]) {
                ++out.degenerate_resamples;
                if (attempt > 64)
                    throw DegenerateChannel("simulate_metrics: persistent degeneracy");
                continue;
            }
            double q = 0.0;
            for (int m = 0; m < M; ++m) q += sigma[m] * std::norm(ch.h_rt[m]);
            out.radar_snr[t] = gains.gbar_rt / M * q * q;

            const EffectiveChannels eff =
                effective_channels_optimal(ch, sigma, svd.matrixV());
            if (!(eff.h_r.squaredNorm() > 0.0)) {
                ++out.degenerate_resamples;
                continue;
            }
            MatrixXcd H_c(M, K);
            for (int k = 0; k < K; ++k) H_c.col(k) = eff.h_k[k];
            bool ok = true;
            for (int k = 0; k < K; ++k) {
                try {
                    out.zf_sinr(t, k) = zf_sinr(H_c, eff.h_r, gains, k);
                } catch (const DegenerateChannel&) {
                    ok = false;
                    break;
                }
            }
            if (!ok) {
                ++out.degenerate_resamples;
                continue;
            }
            break;
        }
    }
    return out;
}

// Validation summary for one configuration.
struct SimReport {
    std::int64_t trials = 0;
    std::uint64_t seed = 0;
    std::int64_t degenerate_resamples = 0;
    double op_r_empirical = 0.0, op_r_se = 0.0, op_r_analytic = 0.0;
    double ks_radar = 0.0;
    VectorXd op_c_empirical, op_c_se, op_c_analytic;
    VectorXd ks_comm;
};

inline double binomial_se(double p_hat, std::int64_t n) {
    return std::sqrt(p_hat * (1.0 - p_hat) / static_cast<double>(n));
}

} // namespace bdris
