#include "cmcface/lorentz.hpp"

#include <algorithm>

namespace cmcface {

const char* to_string(Su11Tag tag) {
    switch (tag) {
        case Su11Tag::Elliptic: return "elliptic";
        case Su11Tag::Hyperbolic: return "hyperbolic";
        case Su11Tag::Parabolic: return "parabolic";
        case Su11Tag::CenterPM: return "center";
    }
    return "?";
}

Mat2C vec_to_matrix(const MinkowskiPoint& v) {
    return {cplx(v.x0 + v.x3, 0), cplx(v.x1, v.x2),
            cplx(v.x1, -v.x2), cplx(v.x0 - v.x3, 0)};
}

MinkowskiPoint matrix_to_vec(const Mat2C& X, double tol) {
    if (max_norm_diff(X, X.adjoint()) > tol)
        throw NotHermitian("matrix_to_vec: matrix is not self-adjoint");
    // Solve X = x0 e0 + x1 e1 + x2 e2 + x3 e3 entrywise.
    MinkowskiPoint v;
    v.x0 = 0.5 * (X.a11.real() + X.a22.real());
    v.x3 = 0.5 * (X.a11.real() - X.a22.real());
    v.x1 = 0.5 * (X.a12.real() + X.a21.real());
    v.x2 = 0.5 * (X.a12.imag() - X.a21.imag());
    return v;
}

double lorentz_inner(const MinkowskiPoint& a, const MinkowskiPoint& b) {
    return -a.x0 * b.x0 + a.x1 * b.x1 + a.x2 * b.x2 + a.x3 * b.x3;
}

bool check_membership(const Mat2C& M, MatrixGroup group, double tol) {
    if (!M.is_finite())
        return false;
    switch (group) {
        case MatrixGroup::Hermitian:
            return max_norm_diff(M, M.adjoint()) <= tol;
        case MatrixGroup::SL2C:
            return std::abs(M.det() - cplx(1)) <= tol;
        case MatrixGroup::SU11:
            return std::abs(M.det() - cplx(1)) <= tol &&
                   max_norm_diff(M * e3() * M.adjoint(), e3()) <= tol;
        case MatrixGroup::SU2:
            return std::abs(M.det() - cplx(1)) <= tol &&
                   max_norm_diff(M * M.adjoint(), Mat2C::identity()) <= tol;
    }
    return false;
}

Su11Class classify_su11(const Mat2C& M, double tol) {
    // Membership is tested with a looser gate than the classification
    // tolerance, so slightly drifted numeric monodromies still classify.
    if (!check_membership(M, MatrixGroup::SU11, std::max(tol, 1e-6)))
        throw NotInGroup("classify_su11: matrix is not in SU(1,1)");

    const double t = M.trace().real();
    Su11Class out;
    if (std::abs(t) < 2.0 - tol) {
        // Elliptic: eigenvalues e^{+-i theta}.  M is SU(1,1)-conjugate to
        // diag(e^{i theta}, e^{-i theta}) with sign(sin theta) equal to the
        // sign of Im(M11); the two are not interchangeable in SU(1,1).
        out.tag = Su11Tag::Elliptic;
        double theta = std::acos(std::clamp(t / 2.0, -1.0, 1.0));
        const double sign_marker = M.a11.imag() - M.a22.imag();
        if (sign_marker < 0.0)
            theta = 2.0 * M_PI - theta;
        out.theta = theta;
        return out;
    }
    if (std::abs(t) > 2.0 + tol) {
        out.tag = Su11Tag::Hyperbolic;
        // |trace| = 2 cosh s; the sign of s records the +-H branch.
        const double s = std::acosh(std::abs(t) / 2.0);
        out.s = (t > 0) ? s : -s;
        return out;
    }
    // |trace| = 2: +-identity or parabolic.
    const double sgn = (t >= 0) ? 1.0 : -1.0;
    if (max_norm_diff(M, Mat2C::identity() * cplx(sgn)) <= tol) {
        out.tag = Su11Tag::CenterPM;
        out.theta = (sgn > 0) ? 0.0 : M_PI;
        return out;
    }
    out.tag = Su11Tag::Parabolic;
    return out;
}

Mat2C su11_from_params(cplx p, cplx q, double tol) {
    if (std::abs(std::norm(p) - std::norm(q) - 1.0) > tol)
        throw NotSU11Params("su11_from_params: p pbar - q qbar != 1");
    return {std::conj(p), -q, -std::conj(q), p};
}

} // namespace cmcface
