#pragma once

#include <complex>
#include <map>
#include <vector>

#include "grushin/core.hpp"

// Closed-form heat kernel k_{t,lambda}(x', y') of the scaled Hermite operator
// -Lap + |lambda|^2 |x'|^2 on R^n,
//
//   k = (|l| / (2 pi sinh(2|l|t)))^{n/2}
//       exp( -(|l|/2) coth(2|l|t) |x'-y'|^2 - |l| tanh(|l|t) x'.y' ),
//
// together with the polynomial prefactors that express its x'-derivatives.

namespace grushin {

// Hyperbolic coefficient bundle for fixed (t, |lambda|).  Below the switch
// point |lambda| t < 1e-4 the entries come from 2-term Taylor expansions;
// the direct formula is 0/0 there.  Above |lambda| t > 350 the kernel
// underflows and `zero` is set.
struct MehlerTerms {
    double log_norm = 0.0;   // log[(|l|/(2 pi sinh 2|l|t))^{n/2}]
    double half_coth = 0.0;  // (|l|/2) coth(2|l|t)
    double lam_tanh = 0.0;   // |l| tanh(|l|t)
    bool zero = false;
};

inline constexpr double kMehlerTaylorSwitch = 1e-4;
inline constexpr double kMehlerUnderflowGuard = 350.0;

MehlerTerms mehler_terms(double t, double lam_norm, int n);

// k_{t,lambda}(x', y').  Positive, symmetric in (x', y'), radial in lambda.
double mehler_kernel(double t, double lam_norm, const Vec& xp, const Vec& yp);

// Sparse multivariate polynomial with complex coefficients.  Variable count
// is fixed at construction; exponents are stored per term.  Only the small
// sizes used by the derivative recursions are ever needed.
class Poly {
  public:
    using Key = std::vector<int>;
    using Complex = std::complex<double>;

    explicit Poly(int nvars) : nvars_(nvars) {}
    static Poly constant(int nvars, Complex c);

    int nvars() const { return nvars_; }
    int degree() const;
    int degree_in(int var) const;
    bool empty() const { return terms_.empty(); }

    void add_term(const Key& exponents, Complex coeff);
    Poly derivative(int var) const;
    Poly operator+(const Poly& other) const;
    Poly operator*(const Poly& other) const;
    Poly scaled(Complex c) const;
    Complex eval(const std::vector<double>& vars) const;

    const std::map<Key, Complex>& terms() const { return terms_; }

  private:
    int nvars_;
    std::map<Key, Complex> terms_;
};

// Prefactor P_alpha with (d/dx')^alpha k_{t,lambda} = P_alpha * k_{t,lambda}.
// The polynomial lives over the 2n variables (x'_1..x'_n, y'_1..y'_n); the
// (t, |lambda|) dependence is baked into the coefficients.  Built by the
// recursion P_0 = 1, P_{a+e_j} = d_j P_a + P_a * d_j Q with Q the exponent
// of the Mehler kernel.
struct DerivativePrefactor {
    Poly poly;
    std::vector<int> alpha;

    std::complex<double> eval(const Vec& xp, const Vec& yp) const;
};

DerivativePrefactor mehler_derivative_prefactor(const std::vector<int>& alpha_x, double t,
                                                const Vec& lam);

}  // namespace grushin
