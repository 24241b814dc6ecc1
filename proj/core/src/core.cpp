#include "grushin/core.hpp"

#include <cmath>

namespace grushin {

double Drift::norm() const { return norm2(a); }

bool Drift::is_zero() const {
    for (double c : a)
        if (c != 0.0) return false;
    return true;
}

SquareMatrix SquareMatrix::identity(int n) {
    SquareMatrix A(n, Vec(n * n, 0.0));
    for (int i = 0; i < n; ++i) A(i, i) = 1.0;
    return A;
}

SquareMatrix SquareMatrix::rotation(int n, int i, int j, double angle) {
    auto A = identity(n);
    const double c = std::cos(angle), s = std::sin(angle);
    A(i, i) = c;
    A(j, j) = c;
    A(i, j) = -s;
    A(j, i) = s;
    return A;
}

double SquareMatrix::orthogonality_defect() const {
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            double g = 0.0;
            for (int k = 0; k < n; ++k) g += a[k * n + i] * a[k * n + j];
            worst = std::max(worst, std::abs(g - (i == j ? 1.0 : 0.0)));
        }
    }
    return worst;
}

double norm2(const Vec& v) { return std::sqrt(dot(v, v)); }

double dot(const Vec& v, const Vec& w) {
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) s += v[i] * w[i];
    return s;
}

Vec sub(const Vec& v, const Vec& w) {
    Vec r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) r[i] = v[i] - w[i];
    return r;
}

Vec add(const Vec& v, const Vec& w) {
    Vec r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) r[i] = v[i] + w[i];
    return r;
}

Vec scale(const Vec& v, double s) {
    Vec r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) r[i] = s * v[i];
    return r;
}

GrushinPoint dilate(const GrushinPoint& x, double s) {
    if (!(s > 0.0)) throw std::invalid_argument("dilate: scale must be positive");
    return GrushinPoint(scale(x.x_prime, s), scale(x.x_dprime, s * s));
}

GrushinPoint rotate(const GrushinPoint& x, const SquareMatrix& A) {
    const int n = static_cast<int>(x.x_prime.size());
    if (A.n != n) throw std::invalid_argument("rotate: matrix size does not match x'");
    if (A.orthogonality_defect() > 1e-12)
        throw std::invalid_argument("rotate: matrix is not orthogonal within 1e-12");
    Vec xp(n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) xp[i] += A(i, j) * x.x_prime[j];
    return GrushinPoint(std::move(xp), x.x_dprime);
}

}  // namespace grushin
