#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>

#include "qct/rng.hpp"

namespace qct {

using cxd = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

inline Mat dagger(const Mat& m) { return m.adjoint(); }

inline Mat kron(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

inline double unitarity_residual(const Mat& u) {
    return (u.adjoint() * u - Mat::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}

inline bool is_unitary(const Mat& u, double tol = 1e-10) {
    if (u.rows() != u.cols() || u.rows() == 0) return false;
    return unitarity_residual(u) <= tol;
}

inline double spectral_norm(const Mat& m) {
    Eigen::JacobiSVD<Mat> svd(m);
    return svd.singularValues()(0);
}

// Eigenvalue phases of a unitary matrix, each in (-pi, pi].
std::vector<double> unitary_eigenphases(const Mat& u);

// Principal square root of a unitary matrix (eigenphases halved).
Mat unitary_sqrt(const Mat& u);

// 2x2 helpers ---------------------------------------------------------------

Mat pauli_x();
Mat pauli_y();
Mat pauli_z();

// e^{-i theta X/2} etc.
Mat rot_x(double theta);
Mat rot_y(double theta);
Mat rot_z(double theta);

// [[cos(t/2), -e^{il} sin(t/2)], [e^{ip} sin(t/2), e^{i(p+l)} cos(t/2)]]
Mat u3_matrix(double theta, double phi, double lambda);

// Angles (theta, phi, lambda, phase) with u == e^{i phase} * u3(theta, phi, lambda).
std::array<double, 4> u3_angles(const Mat& u);

// Unit quaternion (w, x, y, z) of the SU(2) part of a 2x2 unitary,
// sign-canonicalized so the first component above 1e-9 in magnitude is
// positive. u ~ w*I - i(x*X + y*Y + z*Z) up to global phase.
std::array<double, 4> su2_quaternion(const Mat& u);

// Project a 2x2 unitary onto SU(2) (divide out det^(1/2), quaternion sign
// canonicalized).
Mat su2_project(const Mat& u);

// Rotation angle in [0, pi] and Bloch axis of a 2x2 unitary (up to phase).
// The axis is arbitrary (x) for angle 0.
std::pair<double, std::array<double, 3>> su2_axis_angle(const Mat& u);

// Rotation by `theta` about the Bloch axis n (normalized internally).
Mat su2_from_axis_angle(double theta, const std::array<double, 3>& n);

// Haar-ish random unitary via QR of a Ginibre matrix, det-normalized to SU(d).
Mat random_special_unitary(int dim, Rng& rng);

// Nearest Kronecker factorization of a d1*d2 square matrix known to be
// (close to) a tensor product a (d1xd1) x b (d2xd2). Factors are scaled so
// that |det a| = |det b| = 1.
std::pair<Mat, Mat> kron_factor(const Mat& m, int d1, int d2);

}  // namespace qct
