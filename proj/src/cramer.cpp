#include "spinlab/cramer.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

namespace spinlab {

namespace {

OneDMeasure tilted_measure(const PotentialSpec& p, double sigma, quad::Options opt) {
    auto logdens = [&p, sigma](double x) { return sigma * x - p.psi(x); };
    return OneDMeasure::normalize(logdens, p.support, opt);
}

// <exp(i x_hat u)> for the normalized variable x_hat = (x - m)/s.
std::complex<double> char_hat(const TiltedMeasure& t, double u) {
    if (u == 0.0) return {1.0, 0.0};
    const std::complex<double> phase(std::cos(-u * t.mean / t.sd),
                                     std::sin(-u * t.mean / t.sd));
    return phase * t.measure.char_fn(u / t.sd);
}

}  // namespace

double phi_star(const PotentialSpec& p, double sigma, quad::Options opt) {
    return tilted_measure(p, sigma, opt).log_normalizer();
}

TiltedMeasure tilt(const PotentialSpec& p, double sigma, quad::Options opt) {
    TiltedMeasure t;
    t.sigma = sigma;
    t.measure = tilted_measure(p, sigma, opt);
    t.log_phi_star = t.measure.log_normalizer();
    const Moments mo = t.measure.central_moments(5);
    t.mean = mo.mean;
    t.sd = mo.sd;
    t.abs_normalized = mo.abs_normalized;
    t.signed_normalized = mo.signed_normalized;
    return t;
}

TiltedMeasure solve_sigma(const PotentialSpec& p, double m, double sigma_seed,
                          quad::Options opt) {
    double sigma = sigma_seed;
    double lo = -kInf, hi = kInf;  // bracket from the sign of mean - m
    for (int it = 0; it < 100; ++it) {
        const OneDMeasure mu = tilted_measure(p, sigma, opt);
        const double mean = mu.mean();
        const double s2 = mu.sd() * mu.sd();
        const double resid = mean - m;
        if (std::abs(resid) <= 1e-10 * std::max(1.0, mu.sd())) return tilt(p, sigma, opt);
        if (resid < 0)
            lo = std::max(lo, sigma);
        else
            hi = std::min(hi, sigma);
        double next = sigma - resid / s2;  // dm/dsigma = s^2
        // Fall back to bisection if Newton leaves the bracket.
        if (next <= lo || next >= hi) {
            if (std::isfinite(lo) && std::isfinite(hi))
                next = 0.5 * (lo + hi);
            else
                next = sigma - 2.0 * resid / s2;
        }
        sigma = next;
    }
    throw NoConvergence("solve_sigma at m=" + std::to_string(m) + " bracket [" +
                        std::to_string(lo) + ", " + std::to_string(hi) + "]");
}

CramerProfile cramer_profile(const PotentialSpec& p, const std::vector<double>& m_grid,
                             quad::Options opt) {
    if (m_grid.size() < 9) throw Error("GridTooCoarse", "cramer_profile needs >= 9 points");
    for (std::size_t i = 0; i + 1 < m_grid.size(); ++i)
        if (!(m_grid[i] < m_grid[i + 1]))
            throw Error("GridOrder", "m_grid must be sorted increasing");

    CramerProfile prof;
    prof.points.resize(m_grid.size());
    double seed = 0;
    for (std::size_t i = 0; i < m_grid.size(); ++i) {
        const double m = m_grid[i];
        const TiltedMeasure t = solve_sigma(p, m, seed, opt);
        seed = t.sigma;  // continuation along the grid

        CramerPoint pt;
        pt.m = m;
        pt.sigma = t.sigma;
        pt.phi = t.sigma * m - t.log_phi_star;
        pt.phi_dd = 1.0 / (t.sd * t.sd);
        pt.s = t.sd;

        const double hm = 1e-3 * std::max(t.sd, 0.1);
        const TiltedMeasure tl = solve_sigma(p, m - hm, t.sigma, opt);
        const TiltedMeasure tr = solve_sigma(p, m + hm, t.sigma, opt);
        pt.s_dm = (tr.sd - tl.sd) / (2 * hm);
        pt.s_dmm = (tr.sd - 2 * t.sd + tl.sd) / (hm * hm);

        const double hs = 1e-3 / std::max(t.sd, 0.1);
        const TiltedMeasure sl = tilt(p, t.sigma - hs, opt);
        const TiltedMeasure sr = tilt(p, t.sigma + hs, opt);
        pt.res_dm_dsigma = std::abs((sr.mean - sl.mean) / (2 * hs) - t.sd * t.sd);
        pt.res_ds2_dsigma =
            std::abs((sr.sd * sr.sd - sl.sd * sl.sd) / (2 * hs) -
                     t.sd * t.sd * t.sd * t.signed_normalized[3]);
        prof.points[i] = pt;
    }
    return prof;
}

CltResult clt_density(const PotentialSpec& p, double sigma, int K, quad::Options opt) {
    if (K < 2) throw Error("BlockSize", "clt_density needs K >= 2");
    const TiltedMeasure t = tilt(p, sigma, opt);
    const double sqrt_k = std::sqrt(static_cast<double>(K));

    std::size_t evals = 0;
    auto integrand = [&](double xi) -> std::complex<double> {
        ++evals;
        return std::pow(char_hat(t, xi / sqrt_k), K);
    };

    // Expand the xi window segment by segment until the integrand modulus has
    // decayed below 1e-16 on two consecutive segments.
    const double seg_w = 2.0;
    const double freq_bound = 2.0 * sqrt_k;  // phase rate of char^K is O(sqrt K)
    std::complex<double> acc = 0;
    int quiet = 0;
    double lo = 0;
    for (;;) {
        const double hi = lo + seg_w;
        if (hi > 4096.0)
            throw OscillationBudgetExceeded("clt xi window exceeded 4096");
        acc += quad::oscillatory(integrand, lo, hi, freq_bound);
        double seg_max = 0;
        for (int j = 0; j <= 8; ++j)
            seg_max = std::max(seg_max,
                               std::abs(integrand(lo + seg_w * j / 8.0)));
        quiet = seg_max < 1e-16 ? quiet + 1 : 0;
        lo = hi;
        if (quiet >= 2) break;
    }

    CltResult res;
    res.K = K;
    res.sigma = sigma;
    res.g0 = acc.real() / kPi;  // symmetric half-line integral doubled
    res.error = std::abs(res.g0 - 1.0 / std::sqrt(2 * kPi));
    res.xi_budget = evals;

    // Expansion constant on |xi_hat| <= 1/2: h := -Log<exp(i x_hat xi)>.
    res.h_expansion_c = h_expansion_constant(t, 0.5);

    double lam = 0;
    for (int j = 0; j <= 64; ++j) {
        const double u = 0.5 + (20.0 - 0.5) * j / 64.0;
        lam = std::max(lam, std::abs(char_hat(t, u)));
    }
    res.lambda_witness = lam;
    return res;
}

std::vector<CltResult> clt_error_curve(const PotentialSpec& p, double sigma,
                                       const std::vector<int>& Ks, quad::Options opt) {
    std::vector<CltResult> out;
    out.reserve(Ks.size());
    for (std::size_t i = 0; i < Ks.size(); ++i) {
        if (Ks[i] < 2 || (i > 0 && Ks[i] <= Ks[i - 1]))
            throw Error("GridOrder", "Ks must be sorted increasing, each >= 2");
        out.push_back(clt_density(p, sigma, Ks[i], opt));
    }
    // e_K sqrt(K) must stay within a slack factor of 4 of its first value;
    // errors at the quadrature-noise floor are exempt (exact cases).
    const double cap =
        4.0 * out.front().error * std::sqrt(static_cast<double>(out.front().K));
    for (const auto& r : out) {
        const double scaled = r.error * std::sqrt(static_cast<double>(r.K));
        if (scaled > cap && scaled > 1e-12)
            throw Error("RateEnvelope", "e_K sqrt(K) = " + std::to_string(scaled) +
                                            " exceeds 4 x first = " + std::to_string(cap) +
                                            " at K = " + std::to_string(r.K));
    }
    return out;
}

CoarseGrained coarse_grained_hamiltonian(const PotentialSpec& p, double m, int K,
                                         quad::Options opt) {
    const TiltedMeasure center = solve_sigma(p, m, 0, opt);
    auto hbar_at = [&](double mm) {
        const TiltedMeasure t = solve_sigma(p, mm, center.sigma, opt);
        const double phi = t.sigma * mm - t.log_phi_star;
        const CltResult clt = clt_density(p, t.sigma, K, opt);
        return phi - (std::log(clt.g0) - std::log(t.sd)) / static_cast<double>(K);
    };
    CoarseGrained out;
    out.hbar = hbar_at(m);
    const double h = 1e-2 * center.sd;
    const double f_2l = hbar_at(m - 2 * h), f_l = hbar_at(m - h);
    const double f_r = hbar_at(m + h), f_2r = hbar_at(m + 2 * h);
    out.hbar_dd =
        (-f_2l + 16 * f_l - 30 * out.hbar + 16 * f_r - f_2r) / (12 * h * h);
    return out;
}

double h_expansion_constant(const TiltedMeasure& t, double window) {
    double c_fit = 0;
    for (int j = 1; j <= 32; ++j) {
        const double u = window * j / 32.0;
        const std::complex<double> h = -std::log(char_hat(t, u));
        c_fit = std::max(c_fit, std::abs(h - 0.5 * u * u) / (u * u * u));
    }
    return c_fit;
}

double direct_Hbar2(const PotentialSpec& p, double m, quad::Options opt) {
    auto logdens = [&p, m](double u) { return -p.psi(m + u) - p.psi(m - u); };
    const double lo = std::max(p.support.lo - m, m - p.support.hi);
    const double hi = std::min(p.support.hi - m, m - p.support.lo);
    if (!(lo < hi)) throw NonIntegrable("empty pair fiber at m=" + std::to_string(m));
    const double log_i = OneDMeasure::normalize(logdens, {lo, hi}, opt).log_normalizer();
    return -0.5 * (0.5 * std::log(2.0) + log_i);
}

AssumptionReport assumption_report(const PotentialSpec& p, double m_lo, double m_hi,
                                   int m_points, double xi_max, int xi_points,
                                   quad::Options opt) {
    AssumptionReport rep;
    rep.moment_max.assign(6, 0.0);
    rep.sigma_lo = kInf;
    rep.sigma_hi = -kInf;
    double seed = 0;
    for (int i = 0; i < m_points; ++i) {
        const double m = m_lo + (m_hi - m_lo) * i / (m_points - 1.0);
        const TiltedMeasure t = solve_sigma(p, m, seed, opt);
        seed = t.sigma;
        rep.sigma_lo = std::min(rep.sigma_lo, t.sigma);
        rep.sigma_hi = std::max(rep.sigma_hi, t.sigma);
        rep.s_max = std::max(rep.s_max, t.sd);
        for (int k = 1; k <= 5; ++k)
            rep.moment_max[k] = std::max(rep.moment_max[k], t.abs_normalized[k]);
        // |s xi char(xi)| on a grid condensed near the origin plus the far tail.
        for (int j = 1; j <= xi_points; ++j) {
            const double frac = static_cast<double>(j) / xi_points;
            const double xi = xi_max * frac * frac * frac;
            if (xi == 0) continue;
            const double mod = std::abs(t.measure.char_fn(xi));
            rep.char_decay_sup = std::max(rep.char_decay_sup, t.sd * xi * mod);
        }
    }
    return rep;
}

}  // namespace spinlab
