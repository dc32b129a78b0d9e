#pragma once

#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "bdris/errors.hpp"
#include "bdris/rng.hpp"
#include "bdris/types.hpp"

namespace bdris {

inline double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watt_to_dbm(double w) {
    if (w <= 0.0) throw InvalidParameter("watt_to_dbm: power must be positive");
    return 10.0 * std::log10(w) + 30.0;
}
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

// Reference path gain of the urban-micro model at 1 m, unit antenna gains:
// 10^(-2.27 - 2.6 log10 f_c), f_c in GHz.  "log" read as log10 (3GPP convention).
inline double pathloss_reference(double f_c_ghz) {
    if (!(f_c_ghz > 0.0)) throw InvalidParameter("pathloss_reference: f_c must be > 0 GHz");
    return std::pow(10.0, -2.27 - 2.6 * std::log10(f_c_ghz));
}

// All scalar network parameters. Immutable after construction in practice;
// plain aggregate so experiment code can tweak fields before validate().
struct SystemConfig {
    int M = 4; // BS antennas
    int K = 3; // users
    int N = 64; // BD-RIS elements
    double f_c_ghz = 2.0;
    double alpha = 3.67;
    VectorXd p_c_dbm; // per-user communication power, size K
    double p_r_dbm = 15.0; // total radar power
    double sigma_k_dbm = -104.0;
    double sigma_r_dbm = -104.0;
    double varsigma_r_sq = 1.0; // mean RCS power
    double rate_bps_hz = 2.0;
    double gamma_r_th_db = 30.0;

    static SystemConfig umi_default() {
        SystemConfig c;
        c.p_c_dbm = VectorXd::Constant(c.K, 15.0);
        return c;
    }

    // equal per-user power convenience constructor
    static SystemConfig equal_power(int M, int K, int N, double p_c_dbm_all, double p_r_dbm) {
        SystemConfig c = umi_default();
        c.M = M;
        c.K = K;
        c.N = N;
        c.p_c_dbm = VectorXd::Constant(K, p_c_dbm_all);
        c.p_r_dbm = p_r_dbm;
        return c;
    }

    // Throws on violated invariants; returns soft warnings (e.g. small N/M).
    std::vector<std::string> validate() const {
        if (M < 1) throw InvalidParameter("config: M must be >= 1");
        if (K < 1 || K > M) throw InvalidParameter("config: need 1 <= K <= M");
        if (N < M) throw InvalidParameter("config: need N >= M");
        if (p_c_dbm.size() != K) throw InvalidParameter("config: p_c_dbm must have K entries");
        if (!(f_c_ghz > 0.0)) throw InvalidParameter("config: f_c must be positive");
        if (!(varsigma_r_sq > 0.0)) throw InvalidParameter("config: varsigma_r_sq must be > 0");
        for (double v : {alpha, p_r_dbm, sigma_k_dbm, sigma_r_dbm, rate_bps_hz, gamma_r_th_db})
            if (!std::isfinite(v)) throw InvalidParameter("config: non-finite parameter");
        for (int k = 0; k < K; ++k)
            if (!std::isfinite(p_c_dbm[k])) throw InvalidParameter("config: non-finite p_c_dbm");
        std::vector<std::string> warnings;
        if (static_cast<double>(N) / M < 4.0)
            warnings.push_back("N/M < 4: the large-N/M statistics are loose in this regime");
        return warnings;
    }
};

// 2D layout; BS fixed at the origin.
struct Geometry {
    Vector2d ris_pos{50.0, 50.0};
    Vector2d target_pos{100.0, 0.0};
    std::vector<Vector2d> user_pos;

    double bs_ris_distance() const { return ris_pos.norm(); }
    double ris_target_distance() const { return (target_pos - ris_pos).norm(); }
    double ris_user_distance(int k) const { return (user_pos.at(k) - ris_pos).norm(); }
};

// Seeded uniform user placement over [0, side]^2.
inline std::vector<Vector2d> uniform_user_positions(int K, double side, RngStream& rng) {
    std::vector<Vector2d> pos(K);
    for (int k = 0; k < K; ++k) {
        const double x = rng.uniform(0.0, side);
        const double y = rng.uniform(0.0, side);
        pos[k] = Vector2d(x, y);
    }
    return pos;
}

// Linear-unit gains derived from a (config, geometry) pair.
struct DerivedGains {
    double L_ref = 0;       // reference path gain
    VectorXd L_ck;          // effective two-hop path gain per user
    double L_r = 0;         // effective two-hop path gain to the target
    VectorXd gbar_ck;       // L_ck P_ck / sigma_k^2
    double gbar_rt = 0;     // P_r L_r^2 varsigma^2 / sigma_r^2
    VectorXd gbar_rk;       // L_ck P_r / sigma_k^2
    VectorXd sir_k;         // P_ck / P_r
    double varrho = 0;      // N M / (K (M + N - 1))
    double gamma_c_th = 0;  // 2^R - 1
    double gamma_r_th = 0;  // linear sensing threshold
    VectorXd p_c_watt;
    double p_r_watt = 0;
    double sigma_k_watt = 0;
    double sigma_r_watt = 0;
};

inline double varrho_of(int M, int K, int N) {
    return static_cast<double>(N) * M / (static_cast<double>(K) * (M + N - 1));
}

// Gain derivation without the dimensional invariants (the estimation box may
// sweep N below M; the closed forms evaluate there and penalize the regime).
inline DerivedGains derive_gains_unchecked(const SystemConfig& cfg, const Geometry& geom) {
    if (static_cast<int>(geom.user_pos.size()) != cfg.K)
        throw InvalidParameter("derive_gains: geometry must carry K user positions");
    const double d = geom.bs_ris_distance();
    const double d_r = geom.ris_target_distance();
    if (!(d > 0.0) || !(d_r > 0.0))
        throw InvalidParameter("derive_gains: degenerate geometry (zero distance)");

    DerivedGains g;
    g.L_ref = pathloss_reference(cfg.f_c_ghz);
    const double hop_bs_ris = g.L_ref * std::pow(d, -cfg.alpha);
    g.L_ck.resize(cfg.K);
    for (int k = 0; k < cfg.K; ++k) {
        const double d_ck = geom.ris_user_distance(k);
        if (!(d_ck > 0.0))
            throw InvalidParameter("derive_gains: degenerate geometry (user at RIS)");
        g.L_ck[k] = hop_bs_ris * g.L_ref * std::pow(d_ck, -cfg.alpha);
    }
    g.L_r = hop_bs_ris * g.L_ref * std::pow(d_r, -cfg.alpha);

    g.p_c_watt.resize(cfg.K);
    for (int k = 0; k < cfg.K; ++k) g.p_c_watt[k] = dbm_to_watt(cfg.p_c_dbm[k]);
    g.p_r_watt = dbm_to_watt(cfg.p_r_dbm);
    g.sigma_k_watt = dbm_to_watt(cfg.sigma_k_dbm);
    g.sigma_r_watt = dbm_to_watt(cfg.sigma_r_dbm);

    g.gbar_ck.resize(cfg.K);
    g.gbar_rk.resize(cfg.K);
    g.sir_k.resize(cfg.K);
    for (int k = 0; k < cfg.K; ++k) {
        g.gbar_ck[k] = g.L_ck[k] * g.p_c_watt[k] / g.sigma_k_watt;
        g.gbar_rk[k] = g.L_ck[k] * g.p_r_watt / g.sigma_k_watt;
        g.sir_k[k] = g.p_c_watt[k] / g.p_r_watt;
    }
    g.gbar_rt = g.p_r_watt * g.L_r * g.L_r * cfg.varsigma_r_sq / g.sigma_r_watt;
    g.varrho = varrho_of(cfg.M, cfg.K, cfg.N);
    g.gamma_c_th = std::pow(2.0, cfg.rate_bps_hz) - 1.0;
    g.gamma_r_th = db_to_linear(cfg.gamma_r_th_db);
    return g;
}

inline DerivedGains derive_gains(const SystemConfig& cfg, const Geometry& geom) {
    cfg.validate();
    return derive_gains_unchecked(cfg, geom);
}

// ---------------------------------------------------------------------------
// Plain-text config files: flat `key = value` lines, TOML-style syntax for
// scalars, [a, b] arrays and [[x, y], ...] nested arrays; '#' comments.
// ---------------------------------------------------------------------------

namespace detail {

struct TomlValue {
    enum class Kind { Number, String, Boolean, Array } kind = Kind::Number;
    double num = 0.0;
    std::string str;
    bool boolean = false;
    std::vector<TomlValue> arr;
};

class TomlParser {
  public:
    explicit TomlParser(const std::string& text) : s_(text) {}

    std::vector<std::pair<std::string, TomlValue>> parse() {
        std::vector<std::pair<std::string, TomlValue>> out;
        std::istringstream lines(s_);
        std::string line;
        int lineno = 0;
        while (std::getline(lines, line)) {
            ++lineno;
            strip_comment(line);
            trim(line);
            if (line.empty()) continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw InvalidParameter("config parse: missing '=' on line " + std::to_string(lineno));
            std::string key = line.substr(0, eq);
            std::string val = line.substr(eq + 1);
            trim(key);
            trim(val);
            if (key.empty())
                throw InvalidParameter("config parse: empty key on line " + std::to_string(lineno));
            std::size_t pos = 0;
            TomlValue v = parse_value(val, pos, lineno);
            skip_ws(val, pos);
            if (pos != val.size())
                throw InvalidParameter("config parse: trailing junk on line " + std::to_string(lineno));
            out.emplace_back(key, std::move(v));
        }
        return out;
    }

  private:
    static void strip_comment(std::string& line) {
        bool in_str = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            if (line[i] == '"') in_str = !in_str;
            if (line[i] == '#' && !in_str) {
                line.erase(i);
                return;
            }
        }
    }
    static void trim(std::string& t) {
        const char* ws = " \t\r\n";
        const auto b = t.find_first_not_of(ws);
        if (b == std::string::npos) {
            t.clear();
            return;
        }
        const auto e = t.find_last_not_of(ws);
        t = t.substr(b, e - b + 1);
    }
    static void skip_ws(const std::string& v, std::size_t& pos) {
        while (pos < v.size() && (v[pos] == ' ' || v[pos] == '\t')) ++pos;
    }
    static TomlValue parse_value(const std::string& v, std::size_t& pos, int lineno) {
        skip_ws(v, pos);
        if (pos >= v.size())
            throw InvalidParameter("config parse: missing value on line " + std::to_string(lineno));
        TomlValue out;
        if (v[pos] == '[') {
            out.kind = TomlValue::Kind::Array;
            ++pos;
            skip_ws(v, pos);
            if (pos < v.size() && v[pos] == ']') {
                ++pos;
                return out;
            }
            while (true) {
                out.arr.push_back(parse_value(v, pos, lineno));
                skip_ws(v, pos);
                if (pos < v.size() && v[pos] == ',') {
                    ++pos;
                    continue;
                }
                if (pos < v.size() && v[pos] == ']') {
                    ++pos;
                    return out;
                }
                throw InvalidParameter("config parse: bad array on line " + std::to_string(lineno));
            }
        }
        if (v[pos] == '"') {
            out.kind = TomlValue::Kind::String;
            const auto end = v.find('"', pos + 1);
            if (end == std::string::npos)
                throw InvalidParameter("config parse: unterminated string on line " + std::to_string(lineno));
            out.str = v.substr(pos + 1, end - pos - 1);
            pos = end + 1;
            return out;
        }
        if (v.compare(pos, 4, "true") == 0) {
            out.kind = TomlValue::Kind::Boolean;
            out.boolean = true;
            pos += 4;
            return out;
        }
        if (v.compare(pos, 5, "false") == 0) {
            out.kind = TomlValue::Kind::Boolean;
            out.boolean = false;
            pos += 5;
            return out;
        }
        std::size_t used = 0;
        try {
            out.num = std::stod(v.substr(pos), &used);
        } catch (const std::exception&) {
            throw InvalidParameter("config parse: bad number on line " + std::to_string(lineno));
        }
        out.kind = TomlValue::Kind::Number;
        pos += used;
        return out;
    }

    const std::string& s_;
};

} // namespace detail

struct LoadedConfig {
    SystemConfig config;
    Geometry geometry;
};

// Keys: m, k, n, f_c_ghz, alpha, p_c_dbm (scalar applies to all users, or a
// K-array), p_r_dbm, sigma_k_dbm, sigma_r_dbm, varsigma_r_sq, rate_bps_hz,
// gamma_r_th_db, ris_pos = [x, y], target_pos = [x, y], and either
// user_pos = [[x, y], ...] or user_seed (+ optional area_side_m, default 100).
inline LoadedConfig parse_config_text(const std::string& text) {
    detail::TomlParser parser(text);
    auto kv = parser.parse();

    SystemConfig cfg = SystemConfig::umi_default();
    Geometry geom;
    std::optional<double> p_c_scalar;
    std::optional<VectorXd> p_c_vec;
    std::optional<std::uint64_t> user_seed;
    double area_side = 100.0;
    bool have_user_pos = false;

    auto as_num = [](const detail::TomlValue& v, const std::string& key) {
        if (v.kind != detail::TomlValue::Kind::Number)
            throw InvalidParameter("config: key '" + key + "' expects a number");
        return v.num;
    };
    auto as_vec2 = [&](const detail::TomlValue& v, const std::string& key) {
        if (v.kind != detail::TomlValue::Kind::Array || v.arr.size() != 2)
            throw InvalidParameter("config: key '" + key + "' expects [x, y]");
        return Vector2d(as_num(v.arr[0], key), as_num(v.arr[1], key));
    };

    for (const auto& [key, val] : kv) {
        if (key == "m") cfg.M = static_cast<int>(as_num(val, key));
        else if (key == "k") cfg.K = static_cast<int>(as_num(val, key));
        else if (key == "n") cfg.N = static_cast<int>(as_num(val, key));
        else if (key == "f_c_ghz") cfg.f_c_ghz = as_num(val, key);
        else if (key == "alpha") cfg.alpha = as_num(val, key);
        else if (key == "p_r_dbm") cfg.p_r_dbm = as_num(val, key);
        else if (key == "sigma_k_dbm") cfg.sigma_k_dbm = as_num(val, key);
        else if (key == "sigma_r_dbm") cfg.sigma_r_dbm = as_num(val, key);
        else if (key == "varsigma_r_sq") cfg.varsigma_r_sq = as_num(val, key);
        else if (key == "rate_bps_hz") cfg.rate_bps_hz = as_num(val, key);
        else if (key == "gamma_r_th_db") cfg.gamma_r_th_db = as_num(val, key);
        else if (key == "area_side_m") area_side = as_num(val, key);
        else if (key == "ris_pos") geom.ris_pos = as_vec2(val, key);
        else if (key == "target_pos") geom.target_pos = as_vec2(val, key);
        else if (key == "user_seed") user_seed = static_cast<std::uint64_t>(as_num(val, key));
        else if (key == "p_c_dbm") {
            if (val.kind == detail::TomlValue::Kind::Number) p_c_scalar = val.num;
            else if (val.kind == detail::TomlValue::Kind::Array) {
                VectorXd v(val.arr.size());
                for (std::size_t i = 0; i < val.arr.size(); ++i) v[i] = as_num(val.arr[i], key);
                p_c_vec = v;
            } else throw InvalidParameter("config: p_c_dbm expects number or array");
        } else if (key == "user_pos") {
            if (val.kind != detail::TomlValue::Kind::Array)
                throw InvalidParameter("config: user_pos expects [[x, y], ...]");
            geom.user_pos.clear();
            for (const auto& e : val.arr) geom.user_pos.push_back(as_vec2(e, key));
            have_user_pos = true;
        } else {
            throw InvalidParameter("config: unknown key '" + key + "'");
        }
    }

    if (p_c_vec) {
        if (p_c_vec->size() != cfg.K)
            throw InvalidParameter("config: p_c_dbm array must have K entries");
        cfg.p_c_dbm = *p_c_vec;
    } else {
        cfg.p_c_dbm = VectorXd::Constant(cfg.K, p_c_scalar.value_or(15.0));
    }

    if (!have_user_pos) {
        RngStream rng(user_seed.value_or(1));
        geom.user_pos = uniform_user_positions(cfg.K, area_side, rng);
    }
    if (static_cast<int>(geom.user_pos.size()) != cfg.K)
        throw InvalidParameter("config: user_pos must list K positions");

    cfg.validate();
    return {cfg, geom};
}

inline LoadedConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidParameter("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

} // namespace bdris
