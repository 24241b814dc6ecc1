#include "grushin/mehler.hpp"

#include <cmath>

namespace grushin {

namespace {

// log(sinh z) without overflow for large z.
double log_sinh(double z) { return z + std::log1p(-std::exp(-2.0 * z)) - M_LN2; }

}  // namespace

MehlerTerms mehler_terms(double t, double lam_norm, int n) {
    if (!(t > 0.0)) throw std::invalid_argument("mehler_terms: t must be positive");
    if (lam_norm < 0.0) throw std::invalid_argument("mehler_terms: lam_norm must be >= 0");

    MehlerTerms out;
    const double lt = lam_norm * t;
    if (lt > kMehlerUnderflowGuard) {
        out.zero = true;
        return out;
    }
    if (lt < kMehlerTaylorSwitch) {
        const double lt2 = lt * lt;
        out.log_norm = 0.5 * n * (-std::log(4.0 * M_PI * t) - (4.0 * lt2) / 6.0);
        out.half_coth = 0.25 / t + lam_norm * lam_norm * t / 3.0;
        out.lam_tanh = lam_norm * lt * (1.0 - lt2 / 3.0);
    } else {
        out.log_norm = 0.5 * n * (std::log(lam_norm) - std::log(2.0 * M_PI) - log_sinh(2.0 * lt));
        out.half_coth = 0.5 * lam_norm / std::tanh(2.0 * lt);
        out.lam_tanh = lam_norm * std::tanh(lt);
    }
    return out;
}

double mehler_kernel(double t, double lam_norm, const Vec& xp, const Vec& yp) {
    if (xp.size() != yp.size() || xp.empty())
        throw std::invalid_argument("mehler_kernel: mismatched x', y'");
    const int n = static_cast<int>(xp.size());
    const MehlerTerms mt = mehler_terms(t, lam_norm, n);
    if (mt.zero) return 0.0;
    double d2 = 0.0, xy = 0.0;
    for (int j = 0; j < n; ++j) {
        const double d = xp[j] - yp[j];
        d2 += d * d;
        xy += xp[j] * yp[j];
    }
    return std::exp(mt.log_norm - mt.half_coth * d2 - mt.lam_tanh * xy);
}

Poly Poly::constant(int nvars, Complex c) {
    Poly p(nvars);
    p.add_term(Key(nvars, 0), c);
    return p;
}

int Poly::degree() const {
    int deg = 0;
    for (const auto& [key, c] : terms_) {
        int d = 0;
        for (int e : key) d += e;
        deg = std::max(deg, d);
    }
    return deg;
}

int Poly::degree_in(int var) const {
    int deg = 0;
    for (const auto& [key, c] : terms_) deg = std::max(deg, key[var]);
    return deg;
}

void Poly::add_term(const Key& exponents, Complex coeff) {
    auto [it, inserted] = terms_.emplace(exponents, coeff);
    if (!inserted) {
        it->second += coeff;
        if (std::abs(it->second) == 0.0) terms_.erase(it);
    }
}

Poly Poly::derivative(int var) const {
    Poly out(nvars_);
    for (const auto& [key, c] : terms_) {
        if (key[var] == 0) continue;
        Key k = key;
        const double e = k[var]--;
        out.add_term(k, c * e);
    }
    return out;
}

Poly Poly::operator+(const Poly& other) const {
    Poly out = *this;
    for (const auto& [key, c] : other.terms_) out.add_term(key, c);
    return out;
}

Poly Poly::operator*(const Poly& other) const {
    Poly out(nvars_);
    for (const auto& [ka, ca] : terms_) {
        for (const auto& [kb, cb] : other.terms_) {
            Key k(nvars_);
            for (int v = 0; v < nvars_; ++v) k[v] = ka[v] + kb[v];
            out.add_term(k, ca * cb);
        }
    }
    return out;
}

Poly Poly::scaled(Complex c) const {
    Poly out(nvars_);
    for (const auto& [key, coeff] : terms_) out.add_term(key, coeff * c);
    return out;
}

Poly::Complex Poly::eval(const std::vector<double>& vars) const {
    Complex sum = 0.0;
    for (const auto& [key, c] : terms_) {
        double mono = 1.0;
        for (int v = 0; v < nvars_; ++v)
            for (int e = 0; e < key[v]; ++e) mono *= vars[v];
        sum += c * mono;
    }
    return sum;
}

std::complex<double> DerivativePrefactor::eval(const Vec& xp, const Vec& yp) const {
    std::vector<double> vars;
    vars.reserve(xp.size() + yp.size());
    vars.insert(vars.end(), xp.begin(), xp.end());
    vars.insert(vars.end(), yp.begin(), yp.end());
    return poly.eval(vars);
}

DerivativePrefactor mehler_derivative_prefactor(const std::vector<int>& alpha_x, double t,
                                                const Vec& lam) {
    if (!(t > 0.0))
        throw std::invalid_argument("mehler_derivative_prefactor: t must be positive");
    const int n = static_cast<int>(alpha_x.size());
    const double lam_norm = norm2(lam);
    const MehlerTerms mt = mehler_terms(t, lam_norm, n);

    // Variables: x'_0..x'_{n-1}, then y'_0..y'_{n-1}.
    Poly p = Poly::constant(2 * n, 1.0);
    for (int j = 0; j < n; ++j) {
        // d_j Q = -|l| coth(2|l|t) (x'_j - y'_j) - |l| tanh(|l|t) y'_j
        Poly djQ(2 * n);
        Poly::Key kx(2 * n, 0), ky(2 * n, 0);
        kx[j] = 1;
        ky[n + j] = 1;
        djQ.add_term(kx, -2.0 * mt.half_coth);
        djQ.add_term(ky, 2.0 * mt.half_coth - mt.lam_tanh);
        for (int rep = 0; rep < alpha_x[j]; ++rep) p = p.derivative(j) + p * djQ;
    }
    return DerivativePrefactor{std::move(p), alpha_x};
}

}  // namespace grushin
