#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

// Shared geometric primitives for the Grushin setting on R^{n+m}: points
// split as x = (x', x''), drift vectors a in R^n, multi-indices selecting
// powers of the vector fields X_j = d/dx'_j and X_{j,k} = x'_j d/dx''_k,
// the non-isotropic dilations and the x'-rotations.

namespace grushin {

using Vec = std::vector<double>;

// Thrown when a quadrature cannot meet its requested relative tolerance.
struct accuracy_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown by Monte Carlo estimators that end up with no usable samples.
struct degenerate_estimate_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Dimensions {
    int n = 1;
    int m = 1;

    Dimensions() = default;
    Dimensions(int n_, int m_) : n(n_), m(m_) {
        if (n < 1 || m < 1) throw std::invalid_argument("Dimensions: n, m must be >= 1");
    }

    // Homogeneous dimension Q = n + 2m.
    int Q() const { return n + 2 * m; }

    bool operator==(const Dimensions&) const = default;
};

// A point x = (x', x'') in R^n x R^m.
struct GrushinPoint {
    Vec x_prime;
    Vec x_dprime;

    GrushinPoint() = default;
    GrushinPoint(Vec xp, Vec xpp) : x_prime(std::move(xp)), x_dprime(std::move(xpp)) {
        if (x_prime.empty() || x_dprime.empty())
            throw std::invalid_argument("GrushinPoint: both components must be non-empty");
    }

    Dimensions dims() const {
        return Dimensions(static_cast<int>(x_prime.size()), static_cast<int>(x_dprime.size()));
    }
};

// Drift vector a in R^n.  The component along X'' is identically zero: the
// drifted operator G_a = G - 2 a . grad_{x'} is the only choice symmetric
// with respect to a positive measure, namely d(mu_a) = exp(2 a . x') dx.
struct Drift {
    Vec a;

    Drift() = default;
    explicit Drift(Vec a_) : a(std::move(a_)) {}
    static Drift zero(int n) { return Drift(Vec(n, 0.0)); }

    int n() const { return static_cast<int>(a.size()); }
    double norm() const;
    bool is_zero() const;
};

// Multi-index alpha over the vector fields X = (X', X'').  first[j] is the
// power of X_j; second[j*m + k] is the power of X_{j,k}.  X^alpha applies
// the X'' factors first and the X' derivatives after them.
struct GrushinMultiIndex {
    std::vector<int> first;   // length n
    std::vector<int> second;  // length n*m, row-major over (j, k)

    GrushinMultiIndex() = default;
    GrushinMultiIndex(std::vector<int> f, std::vector<int> s)
        : first(std::move(f)), second(std::move(s)) {
        for (int p : first)
            if (p < 0) throw std::invalid_argument("GrushinMultiIndex: negative power");
        for (int p : second)
            if (p < 0) throw std::invalid_argument("GrushinMultiIndex: negative power");
    }

    static GrushinMultiIndex zero(const Dimensions& d) {
        return GrushinMultiIndex(std::vector<int>(d.n, 0), std::vector<int>(d.n * d.m, 0));
    }
    // k e_j on the X' block.
    static GrushinMultiIndex x_prime_power(const Dimensions& d, int j, int k = 1) {
        auto a = zero(d);
        a.first.at(j) = k;
        return a;
    }
    // k e_{(j,l)} on the X'' block.
    static GrushinMultiIndex x_dprime_power(const Dimensions& d, int j, int l, int k = 1) {
        auto a = zero(d);
        a.second.at(j * d.m + l) = k;
        return a;
    }

    int order() const {
        int k = 0;
        for (int p : first) k += p;
        for (int p : second) k += p;
        return k;
    }
    int order_prime() const {
        int k = 0;
        for (int p : first) k += p;
        return k;
    }
    int order_dprime() const { return order() - order_prime(); }

    bool compatible(const Dimensions& d) const {
        return static_cast<int>(first.size()) == d.n &&
               static_cast<int>(second.size()) == d.n * d.m;
    }
};

// Dense row-major square matrix, only ever n x n with small n.
struct SquareMatrix {
    int n = 0;
    Vec a;  // n*n entries

    SquareMatrix() = default;
    SquareMatrix(int n_, Vec entries) : n(n_), a(std::move(entries)) {
        if (static_cast<int>(a.size()) != n * n)
            throw std::invalid_argument("SquareMatrix: size mismatch");
    }
    static SquareMatrix identity(int n);
    // Planar rotation by `angle` in coordinates (i, j), identity elsewhere.
    static SquareMatrix rotation(int n, int i, int j, double angle);

    double operator()(int i, int j) const { return a[i * n + j]; }
    double& operator()(int i, int j) { return a[i * n + j]; }

    // max_ij |(A^T A - I)_ij|
    double orthogonality_defect() const;
};

double norm2(const Vec& v);
double dot(const Vec& v, const Vec& w);
Vec sub(const Vec& v, const Vec& w);
Vec add(const Vec& v, const Vec& w);
Vec scale(const Vec& v, double s);

// Non-isotropic dilation delta_s(x', x'') = (s x', s^2 x''), s > 0.
GrushinPoint dilate(const GrushinPoint& x, double s);

// Rotation acting on the x' block only: A x = (A x', x'').  A must be
// orthogonal within 1e-12 in the max norm of A^T A - I.
GrushinPoint rotate(const GrushinPoint& x, const SquareMatrix& A);

}  // namespace grushin
