#pragma once

#include <cmath>
#include <vector>

#include "bdris/config.hpp"
#include "bdris/errors.hpp"
#include "bdris/numerics.hpp"
#include "bdris/types.hpp"

namespace bdris {

// ---------------------------------------------------------------------------
// Hyper-Erlang model of the unordered eigenvalue of G G^H:
//   f(x) = sum_{m=2}^{2M} chi_m x^(N-M+m-2) e^-x / (N-M+m-2)!
// Coefficients come from expanding the Laguerre-polynomial form of the
// marginal, f(x) = (1/M) sum_{k<M} k!/(k+v)! x^v e^-x [L_k^(v)(x)]^2, v = N-M.
// Every term in the expansion of chi_m has the same sign, so the accumulation
// below has no cancellation; long double keeps enough headroom in the moment
// identities up to N of several hundred.
// ---------------------------------------------------------------------------
struct EigenSpectrumModel {
    int M = 0, N = 0;
    VectorXd chi;                        // chi_m at index m-2, m = 2..2M
    std::vector<long double> chi_ext;    // extended-precision copies
    double log_L_uc = 0.0;               // log of prod (N-m)!(M-m)!
};

inline EigenSpectrumModel chi_coefficients(int M, int N) {
    if (M < 1 || N < M) throw InvalidParameter("chi_coefficients: need 1 <= M <= N");
    const int v = N - M;

    // factorial table in long double (exact ratios matter, logs do not)
    std::vector<long double> fact(static_cast<std::size_t>(N + 2 * M + 1));
    fact[0] = 1.0L;
    for (std::size_t i = 1; i < fact.size(); ++i) fact[i] = fact[i - 1] * static_cast<long double>(i);

    EigenSpectrumModel model;
    model.M = M;
    model.N = N;
    model.chi_ext.assign(static_cast<std::size_t>(2 * M - 1), 0.0L);

    for (int j = 0; j <= 2 * M - 2; ++j) {
        long double total = 0.0L;
        for (int k = 0; k < M; ++k) {
            if (j > 2 * k) continue;  // x^j coefficient of [L_k]^2 vanishes
            long double inner = 0.0L;
            const int i_lo = std::max(0, j - k), i_hi = std::min(k, j);
            for (int i = i_lo; i <= i_hi; ++i) {
                // C(k+v, k-i) C(k+v, k-(j-i)) / (i! (j-i)!)
                const long double c1 = fact[k + v] / (fact[k - i] * fact[v + i]);
                const long double c2 = fact[k + v] / (fact[k - (j - i)] * fact[v + j - i]);
                inner += c1 * c2 / (fact[i] * fact[j - i]);
            }
            total += fact[k] / fact[k + v] * inner;
        }
        const long double mag = fact[v + j] / static_cast<long double>(M) * total;
        model.chi_ext[j] = (j % 2 == 0) ? mag : -mag;
    }

    model.chi.resize(2 * M - 1);
    for (int j = 0; j <= 2 * M - 2; ++j) model.chi[j] = static_cast<double>(model.chi_ext[j]);

    model.log_L_uc = 0.0;
    for (int m = 1; m <= M; ++m)
        model.log_L_uc += std::lgamma(static_cast<double>(N - m + 1)) +
                          std::lgamma(static_cast<double>(M - m + 1));

    // Construction-time self-checks: normalization, mean N, variance N M.
    // (Expressed through sum chi = 1, sum m chi = M+1 and the second-moment
    // identity sum m^2 chi = NM + M^2 - N + 2M + 1 equivalent to V[lambda]=NM.)
    long double s0 = 0.0L, s1 = 0.0L, s2 = 0.0L;
    for (int j = 0; j <= 2 * M - 2; ++j) {
        const long double m = static_cast<long double>(j + 2);
        s0 += model.chi_ext[j];
        s1 += m * model.chi_ext[j];
        s2 += m * m * model.chi_ext[j];
    }
    const long double t2 = static_cast<long double>(N) * M + static_cast<long double>(M) * M -
                           N + 2.0L * M + 1.0L;
    auto rel = [](long double got, long double want) {
        const long double s = std::max<long double>(1.0L, std::abs(want));
        return std::abs(got - want) / s;
    };
    if (rel(s0, 1.0L) > 1e-8L || rel(s1, static_cast<long double>(M + 1)) > 1e-8L ||
        rel(s2, t2) > 1e-8L)
        throw InternalConsistencyError("chi_coefficients: moment identities violated");
    return model;
}

// PDF of the unordered eigenvalue; terms alternate in sign, summed in long double.
inline double eigen_pdf(double x, const EigenSpectrumModel& model) {
    if (!(x > 0.0)) return 0.0;
    const int v = model.N - model.M;
    const long double lx = std::log(static_cast<long double>(x));
    long double sum = 0.0L;
    for (std::size_t j = 0; j < model.chi_ext.size(); ++j) {
        const int a = v + static_cast<int>(j);  // exponent N-M+m-2
        const long double lt = a * lx - static_cast<long double>(x) -
                               std::lgamma(static_cast<long double>(a) + 1.0L);
        sum += model.chi_ext[j] * std::exp(lt);
    }
    return static_cast<double>(sum);
}

// CDF of the unordered eigenvalue: mixture of Erlang CDFs with signed weights.
inline double eigen_cdf(double x, const EigenSpectrumModel& model) {
    if (!(x > 0.0)) return 0.0;
    const int v = model.N - model.M;
    long double sum = 0.0L;
    for (std::size_t j = 0; j < model.chi_ext.size(); ++j) {
        const int shape = v + static_cast<int>(j) + 1;
        sum += model.chi_ext[j] *
               numerics::regularized_gamma_p<long double>(shape, static_cast<long double>(x));
    }
    if (sum < 0.0L) sum = 0.0L;
    if (sum > 1.0L) sum = 1.0L;
    return static_cast<double>(sum);
}

// ---------------------------------------------------------------------------
// Radar SNR CDF (squared-Erlang law): F(g) = ErlangCDF_{M,N}(sqrt(M g / gbar)).
// The incomplete-gamma series keeps small outage values at full precision.
// ---------------------------------------------------------------------------
inline double radar_snr_cdf(double gamma, int M, int N, double gbar_rt) {
    if (!(gamma > 0.0)) return 0.0;
    if (!(gbar_rt > 0.0)) throw InvalidParameter("radar_snr_cdf: gbar_rt must be positive");
    const double s = std::sqrt(static_cast<double>(M) * gamma / gbar_rt);
    return numerics::erlang_cdf(M, static_cast<double>(N), s);
}

inline double radar_op_asymptotic(double gamma_r_th, int M, int N, double gbar_rt) {
    if (!(gamma_r_th > 0.0) || !(gbar_rt > 0.0))
        throw InvalidParameter("radar_op_asymptotic: arguments must be positive");
    const double lg = -std::lgamma(M + 1.0) +
                      0.5 * M * std::log(M * gamma_r_th / gbar_rt) -
                      M * std::log(static_cast<double>(N));
    return std::exp(lg);
}

// ---------------------------------------------------------------------------
// ZF SINR CDF (beta-ratio law). xi_{i,m} = C(M-i, m) B(K+m-1, M-K+i)/B(K-1, M-K+1).
// Two power-series branches that switch at gamma = rho SIR; the switch point
// itself is assigned to the first branch. Requires M > K >= 2.
// ---------------------------------------------------------------------------
struct CommCdfTables {
    int M = 0, K = 0;
    VectorXd xi_low;   // xi_{K,m}, m = 0..M-K  (gamma below the switch)
    VectorXd xi_high;  // xi_{1,m}, m = 0..M-1  (gamma above the switch)
};

inline CommCdfTables comm_cdf_tables(int M, int K) {
    if (K < 2 || M <= K)
        throw UnsupportedRegime("comm_sinr_cdf: closed form needs M > K >= 2");
    CommCdfTables t;
    t.M = M;
    t.K = K;
    const double lb_den = numerics::log_beta(K - 1.0, M - K + 1.0);
    t.xi_low.resize(M - K + 1);
    for (int m = 0; m <= M - K; ++m) {
        const double lc = std::lgamma(M - K + 1.0) - std::lgamma(m + 1.0) -
                          std::lgamma(M - K - m + 1.0);
        t.xi_low[m] = std::exp(lc + numerics::log_beta(K + m - 1.0, static_cast<double>(M)) - lb_den);
    }
    t.xi_high.resize(M);
    for (int m = 0; m <= M - 1; ++m) {
        const double lc = std::lgamma(static_cast<double>(M)) - std::lgamma(m + 1.0) -
                          std::lgamma(static_cast<double>(M - m));
        t.xi_high[m] =
            std::exp(lc + numerics::log_beta(K + m - 1.0, M - K + 1.0) - lb_den);
    }
    return t;
}

inline double comm_sinr_cdf_t(double gamma, const CommCdfTables& t, double rho_sir) {
    if (!(gamma > 0.0)) return 0.0;
    if (!(rho_sir > 0.0)) throw InvalidParameter("comm_sinr_cdf: rho*SIR must be positive");
    const double c = gamma / rho_sir;
    double f;
    if (c <= 1.0) {
        f = 0.0;
        double cp = std::pow(c, t.K - 1);  // c^(K+m-1) built incrementally
        for (int m = 0; m < t.xi_low.size(); ++m) {
            f += (m % 2 == 0 ? 1.0 : -1.0) * t.xi_low[m] * cp;
            cp *= c;
        }
    } else {
        f = 0.0;
        double rp = 1.0;  // (1/c)^m
        for (int m = 0; m < t.xi_high.size(); ++m) {
            f += (m % 2 == 0 ? 1.0 : -1.0) * t.xi_high[m] * rp;
            rp /= c;
        }
    }
    if (f < 0.0) f = 0.0;
    if (f > 1.0) f = 1.0;
    return f;
}

inline double comm_sinr_cdf(double gamma, int M, int K, int N, double sir_k) {
    const CommCdfTables t = comm_cdf_tables(M, K);
    return comm_sinr_cdf_t(gamma, t, varrho_of(M, K, N) * sir_k);
}

inline double comm_op_asymptotic(double gamma_c_th, int M, int K, double varrho, double sir_k) {
    if (K < 2 || M <= K)
        throw UnsupportedRegime("comm_op_asymptotic: needs M > K >= 2");
    const double coeff = std::exp(numerics::log_beta(K - 1.0, static_cast<double>(M)) -
                                  numerics::log_beta(K - 1.0, M - K + 1.0));
    return coeff * std::pow(gamma_c_th / (varrho * sir_k), K - 1.0);
}

// ---------------------------------------------------------------------------
// Quadrature cross-check of the beta-ratio reduction behind the SINR CDF:
// integrates survival(x/c) * beta-density(x) on [0, min(c,1)] and compares
// with the closed form at 20 points of c = gamma / (rho SIR).
// ---------------------------------------------------------------------------
struct BetaRatioCheck {
    double max_abs_err = 0.0;
    bool pass = false;
};

inline BetaRatioCheck beta_ratio_cdf_check(int M, int K, double tol = 1e-8) {
    const CommCdfTables t = comm_cdf_tables(M, K);
    const double log_norm = -numerics::log_beta(K - 1.0, M - K + 1.0);
    auto f_beta_k = [&](double x) {
        if (x <= 0.0 || x >= 1.0) return 0.0;
        return std::exp(log_norm + (K - 2.0) * std::log(x) + (M - K) * std::log1p(-x));
    };
    BetaRatioCheck out;
    // c-grid: below, at, and above the branch switch
    std::vector<double> cs = {0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.75, 0.85,
                              0.95, 1.0, 1.1, 1.3, 1.6, 2.0, 3.0, 5.0, 10.0, 20.0};
    for (double c : cs) {
        auto integrand = [&](double x) {
            const double u = x / c;
            const double surv = (u >= 1.0) ? 0.0 : std::pow(1.0 - u, M - 1.0);
            return surv * f_beta_k(x);
        };
        const double hi = std::min(c, 1.0);
        const double integral = numerics::adaptive_simpson(integrand, 0.0, hi, 1e-12);
        const double closed = comm_sinr_cdf_t(c, t, 1.0);  // rho SIR = 1 makes gamma = c
        out.max_abs_err = std::max(out.max_abs_err, std::abs(integral - closed));
    }
    out.pass = out.max_abs_err <= tol;
    return out;
}

// ---------------------------------------------------------------------------
// Outage probabilities and the network outage objective.
// ---------------------------------------------------------------------------
struct OutageSpec {
    double gamma_c_th = 0.0;
    double gamma_r_th = 0.0;
    double op_th = 0.0;

    void validate() const {
        if (!(gamma_c_th > 0.0) || !(gamma_r_th > 0.0))
            throw InvalidParameter("OutageSpec: thresholds must be positive");
        if (!(op_th > 0.0) || !(op_th < 1.0))
            throw InvalidParameter("OutageSpec: op_th must lie in (0,1)");
    }
};

struct OutageProbabilities {
    VectorXd op_c;  // per user
    double op_r = 0.0;

    double network() const { return std::max(op_c.maxCoeff(), op_r); }
};

inline OutageProbabilities outage_probabilities(const SystemConfig& cfg, const Geometry& geom) {
    const DerivedGains g = derive_gains(cfg, geom);
    const CommCdfTables t = comm_cdf_tables(cfg.M, cfg.K);
    OutageProbabilities out;
    out.op_c.resize(cfg.K);
    for (int k = 0; k < cfg.K; ++k)
        out.op_c[k] = comm_sinr_cdf_t(g.gamma_c_th, t, g.varrho * g.sir_k[k]);
    out.op_r = radar_snr_cdf(g.gamma_r_th, cfg.M, cfg.N, g.gbar_rt);
    return out;
}

// Parameter vector -> network configuration for the estimation problem.
// Coordinates in order: radar power (dBm), element count N* (ceiled), and
// optionally the target position (x_t, y_t) in meters. Targets closer than
// 1 m to the RIS are clipped to 1 m separation.
struct ParameterMapping {
    enum class Kind { PowerElements, PowerElementsTarget } kind = Kind::PowerElements;
    SystemConfig base_config;
    Geometry base_geometry;

    int dimension() const { return kind == Kind::PowerElements ? 2 : 4; }
};

// F(x) = max_k { OP_ck, OP_rt } after applying the mapping. N* below 1 has no
// surface to reflect, so outage is certain.
inline double network_outage(const VectorXd& x, const ParameterMapping& mapping) {
    if (x.size() != mapping.dimension())
        throw InvalidParameter("network_outage: parameter vector has wrong dimension");
    for (Eigen::Index i = 0; i < x.size(); ++i)
        if (!std::isfinite(x[i]) || x[i] < 0.0)
            throw InvalidParameter("network_outage: coordinates must be finite and >= 0");

    SystemConfig cfg = mapping.base_config;
    Geometry geom = mapping.base_geometry;
    cfg.p_r_dbm = x[0];
    const int n_star = static_cast<int>(std::ceil(x[1]));
    if (n_star < 1) return 1.0;
    cfg.N = n_star;
    if (mapping.kind == ParameterMapping::Kind::PowerElementsTarget) {
        geom.target_pos = Vector2d(x[2], x[3]);
        const Vector2d diff = geom.target_pos - geom.ris_pos;
        const double d = diff.norm();
        if (d < 1.0) {
            // minimum-separation guard
            const Vector2d dir = (d > 1e-12) ? Vector2d(diff / d) : Vector2d(1.0, 0.0);
            geom.target_pos = geom.ris_pos + dir;
        }
    }

    const DerivedGains g = derive_gains_unchecked(cfg, geom);
    const CommCdfTables t = comm_cdf_tables(cfg.M, cfg.K);
    double worst = 0.0;
    for (int k = 0; k < cfg.K; ++k)
        worst = std::max(worst, comm_sinr_cdf_t(g.gamma_c_th, t, g.varrho * g.sir_k[k]));
    worst = std::max(worst, radar_snr_cdf(g.gamma_r_th, cfg.M, cfg.N, g.gbar_rt));
    return worst;
}

// Same objective with everything position- and (M,K)-static hoisted out of the
// hot path; one call costs a handful of pow/exp. Agrees with network_outage to
// rounding (cross-checked in tests).
class NetworkOutageObjective {
  public:
    explicit NetworkOutageObjective(ParameterMapping mapping)
        : mapping_(std::move(mapping)), tables_(comm_cdf_tables(mapping_.base_config.M,
                                                                mapping_.base_config.K)) {
        const SystemConfig& cfg = mapping_.base_config;
        const Geometry& geom = mapping_.base_geometry;
        M_ = cfg.M;
        K_ = cfg.K;
        gamma_c_th_ = std::pow(2.0, cfg.rate_bps_hz) - 1.0;
        gamma_r_th_ = db_to_linear(cfg.gamma_r_th_db);
        const double L_ref = pathloss_reference(cfg.f_c_ghz);
        hop_bs_ris_ = L_ref * std::pow(geom.bs_ris_distance(), -cfg.alpha);
        L_ref_ = L_ref;
        alpha_ = cfg.alpha;
        sigma_r_watt_ = dbm_to_watt(cfg.sigma_r_dbm);
        varsigma_sq_ = cfg.varsigma_r_sq;
        L_r_fixed_ = hop_bs_ris_ * L_ref * std::pow(geom.ris_target_distance(), -cfg.alpha);
        p_c_watt_.resize(K_);
        for (int k = 0; k < K_; ++k) p_c_watt_[k] = dbm_to_watt(cfg.p_c_dbm[k]);
    }

    double operator()(const VectorXd& x) const {
        const double p_r_watt = dbm_to_watt(x[0]);
        const int n_star = static_cast<int>(std::ceil(x[1]));
        if (n_star < 1) return 1.0;
        const double rho = varrho_of(M_, K_, n_star);
        double worst = 0.0;
        for (int k = 0; k < K_; ++k) {
            const double sir = p_c_watt_[k] / p_r_watt;
            worst = std::max(worst, comm_sinr_cdf_t(gamma_c_th_, tables_, rho * sir));
        }
        double L_r = L_r_fixed_;
        if (mapping_.kind == ParameterMapping::Kind::PowerElementsTarget) {
            const Vector2d tgt(x[2], x[3]);
            const double d = std::max((tgt - mapping_.base_geometry.ris_pos).norm(), 1.0);
            L_r = hop_bs_ris_ * L_ref_ * std::pow(d, -alpha_);
        }
        const double gbar_rt = p_r_watt * L_r * L_r * varsigma_sq_ / sigma_r_watt_;
        worst = std::max(worst, radar_snr_cdf(gamma_r_th_, M_, n_star, gbar_rt));
        return worst;
    }

    const ParameterMapping& mapping() const { return mapping_; }

  private:
    ParameterMapping mapping_;
    CommCdfTables tables_;
    int M_ = 0, K_ = 0;
    double gamma_c_th_ = 0, gamma_r_th_ = 0;
    double hop_bs_ris_ = 0, L_ref_ = 0, alpha_ = 0;
    double sigma_r_watt_ = 0, varsigma_sq_ = 0, L_r_fixed_ = 0;
    VectorXd p_c_watt_;
};

} // namespace bdris
