#pragma once

#include <cmath>
#include <functional>
#include <sstream>
#include <vector>

#include "bdris/errors.hpp"
#include "bdris/rng.hpp"
#include "bdris/types.hpp"

namespace bdris {

// Smoothed Dirac delta: (1/sigma) K(x/sigma) with the sigmoid kernel
// K(u) = (2/pi) / (e^u + e^-u). Unit mass, symmetric, K(0) = 1/pi.
inline double sigmoid_kernel(double u) {
    const double au = std::abs(u);
    if (au > 700.0) return 0.0;
    const double e = std::exp(-au);
    return (2.0 / M_PI) * e / (1.0 + e * e);
}

inline double kernel_delta(double x, double sigma_err) {
    if (!(sigma_err > 0.0)) throw InvalidParameter("kernel_delta: sigma_err must be > 0");
    return sigmoid_kernel(x / sigma_err) / sigma_err;
}

// Monte Carlo integral of g over the d-dimensional unit hypercube.
inline double mc_integrate(const std::function<double(const VectorXd&)>& g, int d,
                           std::int64_t n_mc, RngStream& rng) {
    if (d < 1) throw InvalidParameter("mc_integrate: dimension must be >= 1");
    if (n_mc < 1) throw InvalidParameter("mc_integrate: n_mc must be >= 1");
    VectorXd u(d);
    double sum = 0.0;
    for (std::int64_t i = 0; i < n_mc; ++i) {
        for (int j = 0; j < d; ++j) u[j] = rng.uniform();
        const double v = g(u);
        if (!std::isfinite(v)) {
            std::ostringstream os;
            os << "mc_integrate: non-finite integrand at u = [";
            for (int j = 0; j < d; ++j) os << (j ? ", " : "") << u[j];
            os << "]";
            throw NumericError(os.str());
        }
        sum += v;
    }
    return sum / static_cast<double>(n_mc);
}

// Root-finding problem: find x in [0, b] with F(x) = y.
struct SnisProblem {
    std::function<double(const VectorXd&)> objective;
    VectorXd bounds;  // b, strictly positive
    double target = 0.0;  // y in (0, 1)

    int dimension() const { return static_cast<int>(bounds.size()); }

    void validate() const {
        if (!objective) throw InvalidParameter("SnisProblem: missing objective");
        if (bounds.size() < 1 || (bounds.array() <= 0.0).any())
            throw InvalidParameter("SnisProblem: bounds must be positive");
        if (!(target > 0.0) || !(target < 1.0))
            throw InvalidParameter("SnisProblem: target must lie in (0, 1)");
    }
};

struct SamplerSettings {
    double sigma_err = 1e-4;      // kernel bandwidth (fixed-sigma mode)
    std::int64_t n_mc = 1000000;  // Monte Carlo points per integral
    int n_trap = 100;             // trapezoid points for the non-inversion draw
    double feasibility_eps_scale = 1e-6;  // eps = scale / prod(b)
    std::uint64_t seed = 1;

    // Annealed mode: evaluate the smoothed density over a bandwidth ladder.
    // The sampling bandwidth is the smallest rung that is still well
    // estimated (relative standard error below rel_se_max) and no wider than
    // sigma_cap_frac * target.
    //
    // Feasibility verdicts are two-tier. The first coordinate tests the
    // exact problem (does any x reach the target?) one decade below the
    // smallest rung (sigma_verdict_factor): an interior target keeps Monte
    // Carlo neighbors within a few bandwidths, while a target separated from
    // the reachable set of F by a finite gap decays through the kernel tail
    // and drops below feasibility_eps. Later coordinates condition on a
    // prefix that carries the sampler's own grid and kernel blur, so they
    // are judged at the selected sampling bandwidth instead; demanding more
    // precision than the prefix was drawn with would reject valid runs.
    bool annealed = false;
    std::vector<double> sigma_levels = {1e-2, 1e-3, 1e-4};
    double rel_se_max = 0.1;
    double sigma_cap_frac = 1.0 / 3.0;
    double sigma_verdict_factor = 0.1;

    void validate() const {
        if (!(sigma_err > 0.0)) throw InvalidParameter("SamplerSettings: sigma_err must be > 0");
        if (n_mc < 1000) throw InvalidParameter("SamplerSettings: n_mc must be >= 1e3");
        if (n_trap < 2) throw InvalidParameter("SamplerSettings: n_trap must be >= 2");
        if (annealed && sigma_levels.empty())
            throw InvalidParameter("SamplerSettings: annealed mode needs sigma levels");
        if (!(sigma_verdict_factor > 0.0) || sigma_verdict_factor > 1.0)
            throw InvalidParameter("SamplerSettings: sigma_verdict_factor must be in (0, 1]");
    }

    std::vector<double> ladder() const {
        return annealed ? sigma_levels : std::vector<double>{sigma_err};
    }
};

struct SnisCoordinateDiag {
    double density = 0.0;      // joint density of the accepted prefix
    double sigma_used = 0.0;   // bandwidth the conditional CDF was built at
    double cdf_mass = 0.0;     // estimated G(b_l) before normalization
};

struct SnisSolution {
    VectorXd x_hat;
    double achieved = 0.0;
    bool feasible = false;
    int failed_prefix = -1;  // coordinate index where the density vanished
    std::vector<SnisCoordinateDiag> diag;
};

// Joint density of (X_(l), Y) at (x_prefix, y): Monte Carlo estimate of the
// integral of the smoothed delta over the remaining coordinates, scaled by
// |B_(l)|^-1. For a full-length prefix the integral degenerates to a single
// delta evaluation.
inline double joint_density(const VectorXd& x_prefix, const SnisProblem& problem,
                            const SamplerSettings& settings, RngStream& rng,
                            double sigma_override = 0.0) {
    problem.validate();
    const int L = problem.dimension();
    const int l = static_cast<int>(x_prefix.size());
    if (l > L) throw InvalidParameter("joint_density: prefix longer than dimension");
    for (int i = 0; i < l; ++i)
        if (x_prefix[i] < 0.0 || x_prefix[i] > problem.bounds[i])
            throw InvalidParameter("joint_density: prefix outside bounds");
    const double sigma = sigma_override > 0.0 ? sigma_override : settings.sigma_err;
    double prefix_vol_inv = 1.0;
    for (int i = 0; i < l; ++i) prefix_vol_inv /= problem.bounds[i];

    VectorXd x(L);
    x.head(l) = x_prefix;
    if (l == L) {
        return prefix_vol_inv * kernel_delta(problem.objective(x) - problem.target, sigma);
    }
    double sum = 0.0;
    for (std::int64_t i = 0; i < settings.n_mc; ++i) {
        for (int j = l; j < L; ++j) x[j] = problem.bounds[j] * rng.uniform();
        const double f = problem.objective(x);
        if (!std::isfinite(f)) throw NumericError("joint_density: non-finite objective");
        sum += kernel_delta(f - problem.target, sigma);
    }
    return prefix_vol_inv * sum / static_cast<double>(settings.n_mc);
}

// Conditional CDF of X_l at x_l given the prefix and Y = y (Monte Carlo form
// of the ratio of the two joint-density integrals).
inline double conditional_cdf(double x_l, const VectorXd& x_prefix, const SnisProblem& problem,
                              const SamplerSettings& settings, RngStream& rng,
                              double sigma_override = 0.0) {
    problem.validate();
    const int L = problem.dimension();
    const int l = static_cast<int>(x_prefix.size());  // 0-based index of the coordinate drawn
    if (l >= L) throw InvalidParameter("conditional_cdf: prefix already complete");
    if (x_l < 0.0 || x_l > problem.bounds[l])
        throw InvalidParameter("conditional_cdf: x_l outside [0, b_l]");
    const double sigma = sigma_override > 0.0 ? sigma_override : settings.sigma_err;
    const double eps = settings.feasibility_eps_scale / problem.bounds.prod();

    const double den = joint_density(x_prefix, problem, settings, rng, sigma);
    if (den <= eps) throw InfeasiblePrefix("conditional_cdf: vanishing prefix density");

    double prefix_vol_inv = 1.0;
    for (int i = 0; i <= l; ++i) prefix_vol_inv /= problem.bounds[i];

    VectorXd x(L);
    x.head(l) = x_prefix;
    double sum = 0.0;
    for (std::int64_t i = 0; i < settings.n_mc; ++i) {
        x[l] = x_l * rng.uniform();
        for (int j = l + 1; j < L; ++j) x[j] = problem.bounds[j] * rng.uniform();
        const double f = problem.objective(x);
        if (!std::isfinite(f)) throw NumericError("conditional_cdf: non-finite objective");
        sum += kernel_delta(f - problem.target, sigma);
    }
    const double num = prefix_vol_inv * x_l * sum / static_cast<double>(settings.n_mc);
    return num / den;
}

// Non-inversion draw: X = integral_0^1 b H(V - G(b u)) du by the n_trap-point
// trapezoidal rule, i.e. the measure of {u : G(b u) < V} scaled by b. H(0) = 0.
inline double non_inversion_sample(const std::function<double(double)>& cdf, double b,
                                   double v, int n_trap) {
    if (n_trap < 2) throw InvalidParameter("non_inversion_sample: n_trap must be >= 2");
    if (!(b > 0.0)) throw InvalidParameter("non_inversion_sample: bound must be positive");
    const double g_b = cdf(b);
    if (!(g_b > 0.0)) throw InfeasiblePrefix("non_inversion_sample: G(b) <= 0");
    if (v < 0.0 || v > g_b + 1e-12)
        throw InvalidParameter("non_inversion_sample: V outside [0, G(b)]");
    const double h = 1.0 / (n_trap - 1);
    double integral = 0.0;
    for (int j = 0; j < n_trap; ++j) {
        const double u = static_cast<double>(j) * h;
        const double ind = (cdf(b * u) < v) ? 1.0 : 0.0;
        const double w = (j == 0 || j == n_trap - 1) ? 0.5 * h : h;
        integral += w * ind;
    }
    return b * integral;
}

inline double mean_kernel(const std::vector<double>& f_values, double y, double sigma) {
    double acc = 0.0;
    for (double f : f_values) acc += kernel_delta(f - y, sigma);
    return acc / static_cast<double>(f_values.size());
}

// Algorithm: for l = 1..L evaluate the prefix density (feasibility gate),
// build the conditional CDF of X_l on the trapezoid grid with one shared
// Monte Carlo sample set, draw V and invert by the Heaviside integral.
//
// Sharing the sample set across the grid makes G(b_l) coincide with the
// prefix density (mass 1 after normalization) and keeps the grid nearly
// monotone; the draw of V is clamped to [0, 0.999 G(b_l)] so boundary noise
// cannot push the sample onto b_l.
inline SnisSolution snis_solve(const SnisProblem& problem, const SamplerSettings& settings) {
    problem.validate();
    settings.validate();
    const int L = problem.dimension();
    const std::vector<double> ladder = settings.ladder();
    const double sigma_verdict = ladder.back() * settings.sigma_verdict_factor;
    const double eps = settings.feasibility_eps_scale / problem.bounds.prod();

    SnisSolution sol;
    sol.x_hat = VectorXd::Zero(L);
    sol.diag.resize(L);

    const int n_trap = settings.n_trap;
    std::vector<double> kernel_mean(n_trap, 0.0);
    std::vector<double> f_at_full(settings.n_mc);

    for (int l = 0; l < L; ++l) {
        RngStream rng = RngStream::substream(settings.seed, 0x51150000ULL + l);
        const int tail = L - l;  // coordinates still random (including x_l's scale)
        MatrixXd u_samples(settings.n_mc, tail);
        for (std::int64_t i = 0; i < settings.n_mc; ++i)
            for (int j = 0; j < tail; ++j) u_samples(i, j) = rng.uniform();

        double prefix_vol_inv = 1.0;
        for (int i = 0; i < l; ++i) prefix_vol_inv /= problem.bounds[i];

        // pass 1: grid point t = 1 doubles as the prefix-density estimate
        VectorXd x(L);
        x.head(l) = sol.x_hat.head(l);
        for (std::int64_t i = 0; i < settings.n_mc; ++i) {
            x[l] = problem.bounds[l] * u_samples(i, 0);
            for (int j = 1; j < tail; ++j) x[l + j] = problem.bounds[l + j] * u_samples(i, j);
            const double f = problem.objective(x);
            if (!std::isfinite(f)) throw NumericError("snis_solve: non-finite objective");
            f_at_full[i] = f;
        }

        // exact-problem feasibility gate at the first coordinate
        if (l == 0) {
            const double density_strict =
                prefix_vol_inv * mean_kernel(f_at_full, problem.target, sigma_verdict);
            if (density_strict <= eps) {
                sol.feasible = false;
                sol.failed_prefix = l;
                sol.diag[l].density = density_strict;
                sol.diag.resize(1);
                return sol;
            }
        }

        // bandwidth selection for the conditional CDF
        double sigma_use = ladder.front();
        double density_use = 0.0;
        for (double s : ladder) {
            double m = 0.0, m2 = 0.0;
            for (std::int64_t i = 0; i < settings.n_mc; ++i) {
                const double v = kernel_delta(f_at_full[i] - problem.target, s);
                m += v;
                m2 += v * v;
            }
            m /= static_cast<double>(settings.n_mc);
            m2 /= static_cast<double>(settings.n_mc);
            const double se = std::sqrt(std::max(0.0, m2 - m * m) /
                                        static_cast<double>(settings.n_mc));
            const bool estimable = m > 0.0 && se / m <= settings.rel_se_max;
            const bool too_wide = s > settings.sigma_cap_frac * problem.target;
            if (estimable) {
                sigma_use = s;
                density_use = prefix_vol_inv * m;
            }
            if (estimable && !too_wide) break;  // narrow enough and still well estimated
        }
        if (density_use <= 0.0)
            density_use = prefix_vol_inv * mean_kernel(f_at_full, problem.target, sigma_use);

        // conditional feasibility of the inherited prefix, at its own blur
        if (l > 0 && density_use <= eps) {
            sol.feasible = false;
            sol.failed_prefix = l;
            sol.diag[l].density = density_use;
            sol.diag.resize(l + 1);
            return sol;
        }

        // pass 2: kernel means over the grid at sigma_use
        const double h = 1.0 / (n_trap - 1);
        kernel_mean.assign(n_trap, 0.0);
        for (int jg = 0; jg < n_trap - 1; ++jg) {
            const double t = static_cast<double>(jg) * h;
            double acc = 0.0;
            for (std::int64_t i = 0; i < settings.n_mc; ++i) {
                x[l] = problem.bounds[l] * t * u_samples(i, 0);
                for (int j = 1; j < tail; ++j)
                    x[l + j] = problem.bounds[l + j] * u_samples(i, j);
                acc += kernel_delta(problem.objective(x) - problem.target, sigma_use);
            }
            kernel_mean[jg] = acc / static_cast<double>(settings.n_mc);
        }
        kernel_mean[n_trap - 1] = mean_kernel(f_at_full, problem.target, sigma_use);

        // G on the grid; shared samples make G(b_l) = 1 by construction
        std::vector<double> g_grid(n_trap);
        const double g_last = kernel_mean[n_trap - 1];
        for (int jg = 0; jg < n_trap; ++jg) {
            const double t = static_cast<double>(jg) * h;
            g_grid[jg] = (g_last > 0.0) ? t * kernel_mean[jg] / g_last : 0.0;
        }

        const double v = rng.uniform(0.0, 0.999 * g_grid[n_trap - 1]);
        auto g_eval = [&](double xq) {
            const int idx = static_cast<int>(std::lround(xq / problem.bounds[l] / h));
            return g_grid[std::min(std::max(idx, 0), n_trap - 1)];
        };
        sol.x_hat[l] = non_inversion_sample(g_eval, problem.bounds[l], v, n_trap);

        sol.diag[l].density = density_use;
        sol.diag[l].sigma_used = sigma_use;
        sol.diag[l].cdf_mass = g_grid[n_trap - 1];
    }

    sol.feasible = true;
    sol.achieved = problem.objective(sol.x_hat);
    return sol;
}

} // namespace bdris
