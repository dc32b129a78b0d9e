#pragma once

#include <cmath>

#include "bdris/channels.hpp"
#include "bdris/config.hpp"
#include "bdris/errors.hpp"
#include "bdris/types.hpp"

namespace bdris {

// Radar-side design from the SVD G = U Sigma^(1/2) V^H.
//
// theta = U^H diagonalizes the two-hop radar channel; sigma holds the positive
// eigenvalues of G G^H in descending order. w_r stores the V-columns scaled to
// unit total power, sum_m ||w_rm||^2 = 1. Note that the radar SNR the design
// actually attains (max_radar_snr below) is reached by beams matched to the
// effective echo channel, matched_radar_beams(); those are a unitary remix of
// the V columns and carry the same total power.
struct RadarDesign {
    MatrixXcd U;      // N x N
    MatrixXcd V;      // M x M
    VectorXd sigma;   // M eigenvalues of G G^H, descending
    MatrixXcd theta;  // N x N, = U^H
    MatrixXcd w_r;    // M x M, = V / sqrt(M)
};

namespace detail {
// Rotate each column so its first significantly-nonzero entry is real-positive.
// Columns j < M of U carry a matching rotation on V so U Sigma^(1/2) V^H is
// unchanged; trailing columns of U span the null space and rotate freely.
inline void phase_normalize(MatrixXcd& U, MatrixXcd& V) {
    const Eigen::Index N = U.rows(), M = V.cols();
    for (Eigen::Index j = 0; j < U.cols(); ++j) {
        Eigen::Index lead = -1;
        for (Eigen::Index i = 0; i < N; ++i) {
            if (std::abs(U(i, j)) > 1e-12) {
                lead = i;
                break;
            }
        }
        if (lead < 0) continue;
        const Complex u = U(lead, j) / std::abs(U(lead, j));
        U.col(j) *= std::conj(u);
        if (j < M) V.col(j) *= std::conj(u);
    }
}
} // namespace detail

inline RadarDesign design_radar(const MatrixXcd& G) {
    const Eigen::Index N = G.rows(), M = G.cols();
    if (N < M) throw InvalidParameter("design_radar: need N >= M");
    Eigen::JacobiSVD<MatrixXcd> svd(G, Eigen::ComputeFullU | Eigen::ComputeFullV);
    RadarDesign d;
    d.U = svd.matrixU();
    d.V = svd.matrixV();
    d.sigma = svd.singularValues().array().square();
    if (d.sigma[M - 1] < 1e-12 * d.sigma[0])
        throw DegenerateChannel("design_radar: numerically rank-deficient G");
    detail::phase_normalize(d.U, d.V);
    d.theta = d.U.adjoint();
    d.w_r = d.V / std::sqrt(static_cast<double>(M));
    return d;
}

// Beams matched to the effective echo channel h_r: every column h_r/(sqrt(M)||h_r||),
// sum of squared norms 1. Together with theta = U^H these attain max_radar_snr
// through the general evaluator at the uniform power split.
inline MatrixXcd matched_radar_beams(const VectorXcd& h_r) {
    const double n = h_r.norm();
    if (!(n > 0.0)) throw DegenerateChannel("matched_radar_beams: zero effective channel");
    const Eigen::Index M = h_r.size();
    MatrixXcd W(M, M);
    const VectorXcd col = h_r / (std::sqrt(static_cast<double>(M)) * n);
    for (Eigen::Index m = 0; m < M; ++m) W.col(m) = col;
    return W;
}

// Maximum achievable radar SNR: (gbar_rt / M) |h_rt^H Sigma h_rt|^2 with
// Sigma = diag(sigma, 0_{N-M}); only the first M coordinates of h_rt enter.
inline double max_radar_snr(const VectorXcd& h_rt, const RadarDesign& design, double gbar_rt,
                            int M) {
    if (design.sigma.size() != M) throw InvalidParameter("max_radar_snr: design/M mismatch");
    double q = 0.0;
    for (int m = 0; m < M; ++m) q += design.sigma[m] * std::norm(h_rt[m]);
    return gbar_rt / M * q * q;
}

// Radar SNR of an arbitrary feasible configuration:
//   sum_m (vs^2/sr^2) p_m || L_r (h_rt^H Theta G)^H (h_rt^H Theta G) w_m ||^2.
// Also evaluated in the factored form ||L_r h_r||^2 sum_m (vs^2/sr^2) p_m |h_r^H w_m|^2;
// the two must agree to 1e-10 relative.
inline double radar_snr_general(const MatrixXcd& theta, const MatrixXcd& w_r,
                                const VectorXd& p_watt, const ChannelSet& ch, double L_r,
                                double varsigma_sq, double sigma_r_watt) {
    require_passive(theta);
    const Eigen::Index M = ch.G.cols();
    if (w_r.rows() != M || w_r.cols() != M)
        throw InvalidParameter("radar_snr_general: W_r must be M x M");
    if (p_watt.size() != M) throw InvalidParameter("radar_snr_general: need M per-beam powers");
    const double wnorm2 = w_r.squaredNorm();
    if (wnorm2 > 1.0 + 1e-9)
        throw ConstraintViolation("radar_snr_general: beamformer power exceeds 1");

    const VectorXcd h_r = (theta * ch.G).adjoint() * ch.h_rt;  // column form of h_rt^H Theta G
    const double nr2 = h_r.squaredNorm();
    const double c = varsigma_sq / sigma_r_watt;

    double literal = 0.0, factored_sum = 0.0;
    for (Eigen::Index m = 0; m < M; ++m) {
        const VectorXcd outer_w = h_r * (h_r.adjoint() * w_r.col(m));  // (h h^H) w_m
        literal += c * p_watt[m] * (L_r * L_r) * outer_w.squaredNorm();
        factored_sum += c * p_watt[m] * std::norm(h_r.dot(w_r.col(m)));
    }
    const double factored = (L_r * L_r) * nr2 * factored_sum;
    const double scale = std::max(std::abs(literal), std::abs(factored));
    if (scale > 0.0 && std::abs(literal - factored) > 1e-10 * scale)
        throw NumericError("radar_snr_general: form mismatch beyond 1e-10");
    return literal;
}

// ---------------------------------------------------------------------------

// Zero-forcing solution W_c = H_c (H_c^H H_c)^-1 D_c with D_c the per-user
// normalization making Tr(W_c W_c^H) = 1.
struct ZfDesign {
    MatrixXcd w_c;  // M x K
    VectorXd d_c;   // K diagonal entries of D_c
};

inline ZfDesign design_zf(const MatrixXcd& H_c) {
    const Eigen::Index M = H_c.rows(), K = H_c.cols();
    if (K > M) throw InvalidParameter("design_zf: need K <= M");
    const MatrixXcd gram = H_c.adjoint() * H_c;
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(gram);
    if (es.eigenvalues()[0] < 1e-12 * es.eigenvalues()[K - 1])
        throw DegenerateChannel("design_zf: numerically rank-deficient H_c");
    const MatrixXcd gram_inv = gram.inverse();
    ZfDesign d;
    d.d_c.resize(K);
    for (Eigen::Index k = 0; k < K; ++k)
        d.d_c[k] = std::sqrt(1.0 / (K * gram_inv(k, k).real()));
    d.w_c = H_c * gram_inv * d.d_c.asDiagonal();
    return d;
}

// h_k^H P_perp h_k with P_perp projecting onto the null space of H_k^H
// (H_k = H_c with column k struck out). Computed via the projector route;
// equals 1/[(H_c^H H_c)^-1]_kk, which design_zf uses.
inline double zf_projected_power(const MatrixXcd& H_c, int k) {
    const Eigen::Index M = H_c.rows(), K = H_c.cols();
    const VectorXcd h_k = H_c.col(k);
    if (K == 1) return h_k.squaredNorm();
    MatrixXcd H_k(M, K - 1);
    Eigen::Index c = 0;
    for (Eigen::Index j = 0; j < K; ++j)
        if (j != k) H_k.col(c++) = H_c.col(j);
    Eigen::HouseholderQR<MatrixXcd> qr(H_k);
    const MatrixXcd Q = MatrixXcd(qr.householderQ()).leftCols(K - 1);
    const VectorXcd res = h_k - Q * (Q.adjoint() * h_k);
    return std::real(h_k.dot(res));
}

// ZF-enabled communication SINR of user k:
//   [(gbar_ck/K) h_k^H P_perp h_k ||h_r||^2] / [(gbar_rk/M) |h_k^H h_r|^2 + ||h_r||^2]
inline double zf_sinr(const MatrixXcd& H_c, const VectorXcd& h_r, const DerivedGains& gains,
                      int k) {
    const Eigen::Index M = H_c.rows();
    const double nr2 = h_r.squaredNorm();
    if (!(nr2 > 0.0)) throw DegenerateChannel("zf_sinr: zero effective radar channel");
    const double quad = zf_projected_power(H_c, k);
    const double cross = std::norm(H_c.col(k).dot(h_r));
    const double K = static_cast<double>(H_c.cols());
    return (gains.gbar_ck[k] / K) * quad * nr2 / ((gains.gbar_rk[k] / M) * cross + nr2);
}

// General SINR of user k for arbitrary beamformers (noise-normalized form):
// desired signal uses the communication beam of user k; interference sums the
// other users' streams and the radar streams.
inline double general_sinr(const std::vector<VectorXcd>& h_k, const MatrixXcd& w_c,
                           const MatrixXcd& w_r, const VectorXd& p_r_watt,
                           const DerivedGains& gains, int k) {
    const VectorXcd& h = h_k[k];
    const double des = gains.gbar_ck[k] * std::norm(h.dot(w_c.col(k)));
    double inter = 0.0;
    for (Eigen::Index i = 0; i < w_c.cols(); ++i) {
        if (i == static_cast<Eigen::Index>(k)) continue;
        // gbar for stream i uses user-k path loss and noise with power P_ci
        const double gbar_ci = gains.L_ck[k] * gains.p_c_watt[i] / gains.sigma_k_watt;
        inter += gbar_ci * std::norm(h.dot(w_c.col(i)));
    }
    double sens = 0.0;
    for (Eigen::Index m = 0; m < w_r.cols(); ++m)
        sens += gains.L_ck[k] * p_r_watt[m] / gains.sigma_k_watt * std::norm(h.dot(w_r.col(m)));
    return des / (inter + sens + 1.0);
}

// Effective channels under the optimal theta = U^H without forming U:
// h_k^H = h_ck^H Sigma^(1/2) V^H, so h_k = V diag(sqrt(sigma)) h_ck[0..M).
// Identical to effective_channels(ch, U^H) up to floating-point rounding.
inline EffectiveChannels effective_channels_optimal(const ChannelSet& ch,
                                                    const VectorXd& sigma, const MatrixXcd& V) {
    const Eigen::Index M = ch.G.cols();
    EffectiveChannels eff;
    const VectorXd s_sqrt = sigma.array().sqrt();
    eff.h_k.resize(ch.h_ck.size());
    for (std::size_t k = 0; k < ch.h_ck.size(); ++k)
        eff.h_k[k] = V * ch.h_ck[k].head(M).cwiseProduct(s_sqrt.cast<Complex>());
    eff.h_r = V * ch.h_rt.head(M).cwiseProduct(s_sqrt.cast<Complex>());
    return eff;
}

} // namespace bdris
