#include "grushin/euclid.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <mutex>

#include "grushin/riesz.hpp"

namespace grushin {

DriftLimitConfig DriftLimitConfig::defaults(const Dimensions& d, int k,
                                            std::vector<double> R_list) {
    DriftLimitConfig cfg;
    cfg.k = k;
    cfg.R_list = std::move(R_list);
    Vec xip(d.n, 0.0), xipp(d.m, 0.0);
    xip[0] = 1.0;
    xipp[0] = 1.0;
    cfg.xi = GrushinPoint(xip, xipp);
    return cfg;
}

void DriftLimitConfig::validate() const {
    if (k < 1) throw std::invalid_argument("DriftLimitConfig: k must be >= 1");
    if (R_list.empty()) throw std::invalid_argument("DriftLimitConfig: empty R_list");
    for (std::size_t i = 1; i < R_list.size(); ++i)
        if (!(R_list[i] < R_list[i - 1]))
            throw std::invalid_argument("DriftLimitConfig: R_list must be strictly decreasing");
    if (std::abs(norm2(xi.x_prime) - 1.0) > 1e-12 || std::abs(norm2(xi.x_dprime) - 1.0) > 1e-12)
        throw std::invalid_argument("DriftLimitConfig: need |xi'| = |xi''| = 1");
}

namespace {

std::mutex fftw_planner_mutex;

}  // namespace

SampledFunction euclid_drift_riesz(const SampledFunction& f, int k, double* imag_residue) {
    if (k < 1) throw std::invalid_argument("euclid_drift_riesz: k must be >= 1");
    const Grid& g = f.grid();
    const int rank = g.rank();
    for (int ax = 0; ax < rank; ++ax)
        if (g.shape[ax] < 4)
            throw std::invalid_argument("euclid_drift_riesz: grid too small for a DFT");

    const std::size_t total = f.size();
    std::vector<std::complex<double>> buf(total);
    for (std::size_t i = 0; i < total; ++i) {
        const GrushinPoint p = f.point(i);
        buf[i] = f.is_valid(i) ? f[i] * std::exp(p.x_prime[0]) : 0.0;
    }

    std::vector<int> dims(g.shape.begin(), g.shape.end());
    auto* data = reinterpret_cast<fftw_complex*>(buf.data());
    fftw_plan fwd, bwd;
    {
        std::lock_guard<std::mutex> lock(fftw_planner_mutex);
        fwd = fftw_plan_dft(rank, dims.data(), data, data, FFTW_FORWARD, FFTW_ESTIMATE);
        bwd = fftw_plan_dft(rank, dims.data(), data, data, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    fftw_execute(fwd);

    // multiplier over the continuous frequencies l_ax = signed_index/(N h);
    // the grid-origin phases cancel between the two transforms
    std::vector<int> idx(rank, 0);
    for (std::size_t i = 0; i < total; ++i) {
        double l2 = 0.0, l1 = 0.0;
        for (int ax = 0; ax < rank; ++ax) {
            int s = idx[ax] <= dims[ax] / 2 ? idx[ax] : idx[ax] - dims[ax];
            if (dims[ax] % 2 == 0 && idx[ax] == dims[ax] / 2) s = -dims[ax] / 2;
            const double l = static_cast<double>(s) / (dims[ax] * g.spacing[ax]);
            l2 += l * l;
            if (ax == 0) l1 = l;
        }
        const std::complex<double> num(-1.0, 2.0 * M_PI * l1);
        std::complex<double> mult = std::pow(num, k) * std::pow(1.0 + 4.0 * M_PI * M_PI * l2,
                                                                -0.5 * k);
        buf[i] *= mult;
        for (int ax = rank - 1; ax >= 0; --ax) {
            if (++idx[ax] < dims[ax]) break;
            idx[ax] = 0;
        }
    }

    fftw_execute(bwd);
    {
        std::lock_guard<std::mutex> lock(fftw_planner_mutex);
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(bwd);
    }

    SampledFunction out(f.dims(), g);
    const double scale = 1.0 / static_cast<double>(total);
    double resid = 0.0;
    for (std::size_t i = 0; i < total; ++i) {
        const GrushinPoint p = f.point(i);
        const std::complex<double> v = buf[i] * scale * std::exp(-p.x_prime[0]);
        out[i] = v.real();
        resid = std::max(resid, std::abs(v.imag()));
    }
    if (imag_residue != nullptr) *imag_residue = resid;
    return out;
}

SampledFunction scaled_conjugated_riesz(const SampledFunction& f, const DriftLimitConfig& cfg,
                                        double R, const QuadratureSpec& q) {
    cfg.validate();
    bool listed = false;
    for (double r : cfg.R_list) listed |= std::abs(r - R) < 1e-12;
    if (!listed) throw std::invalid_argument("scaled_conjugated_riesz: R not in cfg.R_list");

    const Dimensions d = f.dims();
    const Grid& fg = f.grid();

    // g(y) = f((y - xi)/R) sampled exactly on the image grid y = xi + R x.
    Grid gg = fg;
    for (int ax = 0; ax < fg.rank(); ++ax) {
        const double xi_ax = ax < d.n ? cfg.xi.x_prime[ax] : cfg.xi.x_dprime[ax - d.n];
        gg.origin[ax] = xi_ax + R * fg.origin[ax];
        gg.spacing[ax] = R * fg.spacing[ax];
    }
    SampledFunction gfun(d, gg);
    for (std::size_t i = 0; i < f.size(); ++i) {
        gfun[i] = f[i];
        gfun.set_valid(i, f.is_valid(i));
    }

    Vec avec(d.n, 0.0);
    avec[0] = 1.0 / R;
    const GrushinMultiIndex alpha = GrushinMultiIndex::x_prime_power(d, 0, cfg.k);
    SampledFunction transformed = apply_riesz(gfun, alpha, Drift(avec), q);

    // (Lambda_R U) h(x) = h(R x + xi): index i of the g-grid is exactly the
    // image of index i of the f-grid.
    SampledFunction out(d, fg);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = transformed[i];
    return out;
}

}  // namespace grushin
