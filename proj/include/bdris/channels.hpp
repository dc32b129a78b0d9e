#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>

#include "bdris/config.hpp"
#include "bdris/errors.hpp"
#include "bdris/rng.hpp"
#include "bdris/types.hpp"

namespace bdris {

// One small-scale fading realization. Entries are i.i.d. CN(0,1)
// (variance 1/2 per real component).
struct ChannelSet {
    MatrixXcd G;                  // N x M, BS -> RIS
    std::vector<VectorXcd> h_ck;  // K vectors of length N, RIS -> user
    VectorXcd h_rt;               // length N, RIS -> target
};

struct EffectiveChannels {
    std::vector<VectorXcd> h_k;  // K vectors of length M, h_k^H = h_ck^H Theta G
    VectorXcd h_r;               // length M, h_r^H = h_rt^H Theta G
};

// Fill order is pinned (G column-major, then users in order, then target)
// so a given stream yields a bitwise-identical set.
inline ChannelSet sample_channels(int M, int K, int N, RngStream& rng) {
    if (M < 1 || K < 1 || N < 1) throw InvalidParameter("sample_channels: bad dimensions");
    ChannelSet ch;
    ch.G.resize(N, M);
    for (int j = 0; j < M; ++j)
        for (int i = 0; i < N; ++i) ch.G(i, j) = rng.cgauss();
    ch.h_ck.resize(K);
    for (int k = 0; k < K; ++k) {
        ch.h_ck[k].resize(N);
        for (int i = 0; i < N; ++i) ch.h_ck[k][i] = rng.cgauss();
    }
    ch.h_rt.resize(N);
    for (int i = 0; i < N; ++i) ch.h_rt[i] = rng.cgauss();
    return ch;
}

inline ChannelSet sample_channels(const SystemConfig& cfg, RngStream& rng) {
    return sample_channels(cfg.M, cfg.K, cfg.N, rng);
}

// Largest eigenvalue of Theta Theta^H; passivity means <= 1.
inline double passivity_margin(const MatrixXcd& theta) {
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(theta * theta.adjoint());
    return es.eigenvalues().maxCoeff();
}

inline void require_passive(const MatrixXcd& theta, double tol = 1e-9) {
    const double top = passivity_margin(theta);
    if (top > 1.0 + tol)
        throw ConstraintViolation("phase matrix violates passivity: max eig " + std::to_string(top));
}

// h_k^H = h_ck^H Theta G (stored as column vectors h_k = G^H Theta^H h_ck).
inline EffectiveChannels effective_channels(const ChannelSet& ch, const MatrixXcd& theta) {
    if (theta.rows() != ch.G.rows() || theta.cols() != ch.G.rows())
        throw InvalidParameter("effective_channels: Theta must be N x N");
    require_passive(theta);
    EffectiveChannels eff;
    const MatrixXcd TG = theta * ch.G;  // N x M
    eff.h_k.resize(ch.h_ck.size());
    for (std::size_t k = 0; k < ch.h_ck.size(); ++k)
        eff.h_k[k] = TG.adjoint() * ch.h_ck[k];
    eff.h_r = TG.adjoint() * ch.h_rt;
    return eff;
}

// ---------------------------------------------------------------------------
// Binary fixture dump: little-endian, "BDCH" magic, u32 version, u64 N, M, K,
// then doubles re/im interleaved: G column-major, h_ck in user order, h_rt.
// ---------------------------------------------------------------------------

namespace detail {
inline void put_u64(std::ostream& os, std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    os.write(reinterpret_cast<const char*>(b), 8);
}
inline std::uint64_t get_u64(std::istream& is) {
    unsigned char b[8];
    is.read(reinterpret_cast<char*>(b), 8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
}
inline void put_f64(std::ostream& os, double d) {
    std::uint64_t v;
    std::memcpy(&v, &d, 8);
    put_u64(os, v);
}
inline double get_f64(std::istream& is) {
    const std::uint64_t v = get_u64(is);
    double d;
    std::memcpy(&d, &v, 8);
    return d;
}
inline void put_cvec(std::ostream& os, const VectorXcd& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        put_f64(os, v[i].real());
        put_f64(os, v[i].imag());
    }
}
inline void get_cvec(std::istream& is, VectorXcd& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double re = get_f64(is);
        const double im = get_f64(is);
        v[i] = Complex(re, im);
    }
}
} // namespace detail

inline void dump_channels(const ChannelSet& ch, std::ostream& os) {
    os.write("BDCH", 4);
    detail::put_u64(os, 1);  // version
    detail::put_u64(os, static_cast<std::uint64_t>(ch.G.rows()));
    detail::put_u64(os, static_cast<std::uint64_t>(ch.G.cols()));
    detail::put_u64(os, static_cast<std::uint64_t>(ch.h_ck.size()));
    for (Eigen::Index j = 0; j < ch.G.cols(); ++j)
        for (Eigen::Index i = 0; i < ch.G.rows(); ++i) {
            detail::put_f64(os, ch.G(i, j).real());
            detail::put_f64(os, ch.G(i, j).imag());
        }
    for (const auto& h : ch.h_ck) detail::put_cvec(os, h);
    detail::put_cvec(os, ch.h_rt);
}

inline ChannelSet load_channels(std::istream& is) {
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, "BDCH", 4) != 0)
        throw InvalidParameter("load_channels: bad magic");
    const std::uint64_t version = detail::get_u64(is);
    if (version != 1) throw InvalidParameter("load_channels: unsupported version");
    const auto N = static_cast<Eigen::Index>(detail::get_u64(is));
    const auto M = static_cast<Eigen::Index>(detail::get_u64(is));
    const auto K = static_cast<Eigen::Index>(detail::get_u64(is));
    if (N < 1 || M < 1 || K < 0 || N > (1 << 20) || M > (1 << 20) || K > (1 << 20))
        throw InvalidParameter("load_channels: implausible dimensions");
    ChannelSet ch;
    ch.G.resize(N, M);
    for (Eigen::Index j = 0; j < M; ++j)
        for (Eigen::Index i = 0; i < N; ++i) {
            const double re = detail::get_f64(is);
            const double im = detail::get_f64(is);
            ch.G(i, j) = Complex(re, im);
        }
    ch.h_ck.resize(static_cast<std::size_t>(K));
    for (auto& h : ch.h_ck) {
        h.resize(N);
        detail::get_cvec(is, h);
    }
    ch.h_rt.resize(N);
    detail::get_cvec(is, ch.h_rt);
    if (!is) throw InvalidParameter("load_channels: truncated stream");
    return ch;
}

inline void dump_channels_file(const ChannelSet& ch, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw InvalidParameter("cannot open for write: " + path);
    dump_channels(ch, os);
}

inline ChannelSet load_channels_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw InvalidParameter("cannot open for read: " + path);
    return load_channels(is);
}

} // namespace bdris
