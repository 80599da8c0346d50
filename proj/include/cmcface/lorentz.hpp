#ifndef CMCFACE_LORENTZ_HPP
#define CMCFACE_LORENTZ_HPP

#include <cmath>
#include <complex>

#include "cmcface/errors.hpp"

namespace cmcface {

using cplx = std::complex<double>;

/// Point of the 4-dimensional Lorentz space R^4_1, signature (-,+,+,+).
struct MinkowskiPoint {
    double x0 = 0, x1 = 0, x2 = 0, x3 = 0;

    MinkowskiPoint operator+(const MinkowskiPoint& o) const {
        return {x0 + o.x0, x1 + o.x1, x2 + o.x2, x3 + o.x3};
    }
    MinkowskiPoint operator-(const MinkowskiPoint& o) const {
        return {x0 - o.x0, x1 - o.x1, x2 - o.x2, x3 - o.x3};
    }
    MinkowskiPoint operator*(double s) const { return {s * x0, s * x1, s * x2, s * x3}; }
    MinkowskiPoint operator-() const { return {-x0, -x1, -x2, -x3}; }
};

/// 2x2 complex matrix, row major.  No constraint is imposed by the type
/// itself; group membership is a predicate, not an invariant.
struct Mat2C {
    cplx a11{0}, a12{0}, a21{0}, a22{0};

    static Mat2C identity() { return {1, 0, 0, 1}; }
    static Mat2C diag(cplx a, cplx d) { return {a, 0, 0, d}; }

    cplx det() const { return a11 * a22 - a12 * a21; }
    cplx trace() const { return a11 + a22; }

    /// Conjugate transpose.
    Mat2C adjoint() const {
        return {std::conj(a11), std::conj(a21), std::conj(a12), std::conj(a22)};
    }

    /// Inverse via the adjugate; requires det != 0.
    Mat2C inverse() const {
        const cplx d = det();
        return {a22 / d, -a12 / d, -a21 / d, a11 / d};
    }

    Mat2C operator*(const Mat2C& o) const {
        return {a11 * o.a11 + a12 * o.a21, a11 * o.a12 + a12 * o.a22,
                a21 * o.a11 + a22 * o.a21, a21 * o.a12 + a22 * o.a22};
    }
    Mat2C operator*(cplx s) const { return {s * a11, s * a12, s * a21, s * a22}; }
    Mat2C operator+(const Mat2C& o) const {
        return {a11 + o.a11, a12 + o.a12, a21 + o.a21, a22 + o.a22};
    }
    Mat2C operator-(const Mat2C& o) const {
        return {a11 - o.a11, a12 - o.a12, a21 - o.a21, a22 - o.a22};
    }
    Mat2C operator-() const { return {-a11, -a12, -a21, -a22}; }

    /// Entrywise max norm.
    double max_norm() const {
        return std::max(std::max(std::abs(a11), std::abs(a12)),
                        std::max(std::abs(a21), std::abs(a22)));
    }

    bool is_finite() const {
        auto ok = [](cplx c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); };
        return ok(a11) && ok(a12) && ok(a21) && ok(a22);
    }
};

inline double max_norm_diff(const Mat2C& a, const Mat2C& b) { return (a - b).max_norm(); }

// The basis e_0..e_3 of the Hermitian-matrix model of R^4_1.
inline Mat2C e0() { return {1, 0, 0, 1}; }
inline Mat2C e1() { return {0, 1, 1, 0}; }
inline Mat2C e2() { return {0, cplx(0, 1), cplx(0, -1), 0}; }
inline Mat2C e3() { return {1, 0, 0, -1}; }

enum class MatrixGroup { SL2C, SU11, SU2, Hermitian };

enum class Su11Tag { Elliptic, Hyperbolic, Parabolic, CenterPM };

/// Conjugacy class of an SU(1,1) element.  theta is the rotation angle in
/// [0,2pi) for Elliptic (0 or pi for CenterPM = +I / -I), s the translation
/// parameter for Hyperbolic (sign = sign of the trace).
struct Su11Class {
    Su11Tag tag = Su11Tag::CenterPM;
    double theta = 0.0;
    double s = 0.0;
};

const char* to_string(Su11Tag tag);

/// X = sum x_k e_k.  Result is self-adjoint with det(X) = -<v,v>.
Mat2C vec_to_matrix(const MinkowskiPoint& v);

/// Inverse of vec_to_matrix.  Throws NotHermitian when ||X - X*|| > tol.
MinkowskiPoint matrix_to_vec(const Mat2C& X, double tol = 1e-9);

/// -x0 y0 + x1 y1 + x2 y2 + x3 y3.
double lorentz_inner(const MinkowskiPoint& a, const MinkowskiPoint& b);

bool check_membership(const Mat2C& M, MatrixGroup group, double tol);

/// Conjugacy classification in SU(1,1).  Requires membership within tol;
/// near-parabolic traces (| |tr|-2 | <= tol) resolve to Parabolic.
Su11Class classify_su11(const Mat2C& M, double tol = 1e-9);

/// Element of SU(1,1) in the (p,q) parametrization [[pbar,-q],[-qbar,p]],
/// p pbar - q qbar = 1.  Throws NotSU11Params if the constraint fails.
Mat2C su11_from_params(cplx p, cplx q, double tol = 1e-12);

} // namespace cmcface

#endif // CMCFACE_LORENTZ_HPP
