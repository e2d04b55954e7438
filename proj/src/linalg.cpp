#include "qct/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "qct/error.hpp"

namespace qct {

std::vector<double> unitary_eigenphases(const Mat& u) {
    Eigen::ComplexEigenSolver<Mat> es(u, /*computeEigenvectors=*/false);
    std::vector<double> phases(static_cast<size_t>(u.rows()));
    for (Eigen::Index k = 0; k < u.rows(); ++k) phases[static_cast<size_t>(k)] = std::arg(es.eigenvalues()(k));
    std::sort(phases.begin(), phases.end());
    return phases;
}

Mat unitary_sqrt(const Mat& u) {
    Eigen::ComplexEigenSolver<Mat> es(u, /*computeEigenvectors=*/true);
    Vec d = es.eigenvalues();
    for (Eigen::Index k = 0; k < d.size(); ++k) {
        d(k) = std::polar(1.0, std::arg(d(k)) / 2.0);
    }
    const Mat& v = es.eigenvectors();
    return v * d.asDiagonal() * v.adjoint();
}

Mat pauli_x() {
    Mat m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

Mat pauli_y() {
    Mat m(2, 2);
    m << 0, cxd(0, -1), cxd(0, 1), 0;
    return m;
}

Mat pauli_z() {
    Mat m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

Mat rot_x(double theta) {
    const double c = std::cos(theta / 2), s = std::sin(theta / 2);
    Mat m(2, 2);
    m << c, cxd(0, -s), cxd(0, -s), c;
    return m;
}

Mat rot_y(double theta) {
    const double c = std::cos(theta / 2), s = std::sin(theta / 2);
    Mat m(2, 2);
    m << c, -s, s, c;
    return m;
}

Mat rot_z(double theta) {
    Mat m(2, 2);
    m << std::polar(1.0, -theta / 2), 0, 0, std::polar(1.0, theta / 2);
    return m;
}

Mat u3_matrix(double theta, double phi, double lambda) {
    const double c = std::cos(theta / 2), s = std::sin(theta / 2);
    Mat m(2, 2);
    m << c, -std::polar(1.0, lambda) * s, std::polar(1.0, phi) * s,
        std::polar(1.0, phi + lambda) * c;
    return m;
}

std::array<double, 4> u3_angles(const Mat& u) {
    // u = e^{i phase} u3(theta, phi, lambda); u3 has a real non-negative (0,0)
    // entry, so the phase is arg(u00) unless u00 vanishes.
    const double a00 = std::abs(u(0, 0));
    const double theta = 2.0 * std::atan2(std::abs(u(1, 0)), a00);
    double phase, phi, lambda;
    if (a00 > 1e-12) {
        phase = std::arg(u(0, 0));
        phi = std::arg(u(1, 0)) - phase;
        lambda = (std::abs(u(1, 1)) > 1e-12) ? std::arg(u(1, 1)) - phase - phi
                                             : std::arg(-u(0, 1)) - phase;
    } else {
        // theta == pi: only phi + arg structure matters; set lambda = 0.
        phase = std::arg(u(1, 0));
        phi = 0.0;
        lambda = std::arg(-u(0, 1)) - phase;
    }
    return {theta, phi, lambda, phase};
}

std::array<double, 4> su2_quaternion(const Mat& u) {
    // Remove the determinant phase, then read off u = w I - i(xX + yY + zZ).
    const cxd det = u(0, 0) * u(1, 1) - u(0, 1) * u(1, 0);
    const cxd ph = std::polar(1.0, -std::arg(det) / 2.0);
    const Mat s = ph * u;
    std::array<double, 4> q{
        0.5 * (s(0, 0).real() + s(1, 1).real()),
        -0.5 * (s(0, 1).imag() + s(1, 0).imag()),
        0.5 * (s(1, 0).real() - s(0, 1).real()),
        0.5 * (s(1, 1).imag() - s(0, 0).imag()),
    };
    for (double c : q) {
        if (std::abs(c) > 1e-9) {
            if (c < 0)
                for (auto& v : q) v = -v;
            break;
        }
    }
    return q;
}

Mat su2_project(const Mat& u) {
    const auto q = su2_quaternion(u);
    Mat m(2, 2);
    m << cxd(q[0], -q[3]), cxd(-q[2], -q[1]), cxd(q[2], -q[1]), cxd(q[0], q[3]);
    return m;
}

std::pair<double, std::array<double, 3>> su2_axis_angle(const Mat& u) {
    auto q = su2_quaternion(u);
    // q = (cos(theta/2), n sin(theta/2))
    double w = std::clamp(q[0], -1.0, 1.0);
    double theta = 2.0 * std::acos(w);
    double s = std::sqrt(std::max(0.0, 1.0 - w * w));
    if (s < 1e-14) return {0.0, {1.0, 0.0, 0.0}};
    return {theta, {q[1] / s, q[2] / s, q[3] / s}};
}

Mat su2_from_axis_angle(double theta, const std::array<double, 3>& n) {
    const double nn = std::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
    if (nn < 1e-300) return Mat::Identity(2, 2);
    const double c = std::cos(theta / 2), s = std::sin(theta / 2);
    const double x = n[0] / nn, y = n[1] / nn, z = n[2] / nn;
    Mat m(2, 2);
    m << cxd(c, -s * z), cxd(-s * y, -s * x), cxd(s * y, -s * x), cxd(c, s * z);
    return m;
}

Mat random_special_unitary(int dim, Rng& rng) {
    Mat g(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) g(i, j) = cxd(rng.normal(), rng.normal());
    Eigen::HouseholderQR<Mat> qr(g);
    Mat q = qr.householderQ();
    Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < dim; ++j) {
        const cxd d = r(j, j);
        q.col(j) *= (std::abs(d) > 1e-300) ? d / std::abs(d) : cxd(1, 0);
    }
    const cxd det = q.determinant();
    q *= std::polar(1.0, -std::arg(det) / dim);
    return q;
}

std::pair<Mat, Mat> kron_factor(const Mat& m, int d1, int d2) {
    if (m.rows() != Eigen::Index(d1) * d2 || m.cols() != m.rows())
        throw Error(Errc::dimension_mismatch, "kron_factor: shape does not match d1*d2");
    // Rearrange so a tensor product becomes a rank-1 matrix vec(a) vec(b)^T.
    Mat r(d1 * d1, d2 * d2);
    for (int i1 = 0; i1 < d1; ++i1)
        for (int j1 = 0; j1 < d1; ++j1)
            for (int i2 = 0; i2 < d2; ++i2)
                for (int j2 = 0; j2 < d2; ++j2)
                    r(i1 * d1 + j1, i2 * d2 + j2) = m(i1 * d2 + i2, j1 * d2 + j2);
    Eigen::JacobiSVD<Mat> svd(r, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const double s0 = svd.singularValues()(0);
    Mat a(d1, d1), b(d2, d2);
    for (int i1 = 0; i1 < d1; ++i1)
        for (int j1 = 0; j1 < d1; ++j1) a(i1, j1) = svd.matrixU()(i1 * d1 + j1, 0);
    for (int i2 = 0; i2 < d2; ++i2)
        for (int j2 = 0; j2 < d2; ++j2) b(i2, j2) = std::conj(svd.matrixV()(i2 * d2 + j2, 0));
    a *= std::sqrt(s0);
    b *= std::sqrt(s0);
    // Normalize the split of the scale so each factor has |det| = 1.
    const double da = std::abs(a.determinant());
    if (da > 1e-300) {
        const double f = std::pow(da, -1.0 / d1);
        a *= f;
        b /= f;
    }
    return {a, b};
}

}  // namespace qct
