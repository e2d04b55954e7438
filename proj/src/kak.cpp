#include <algorithm>
#include <array>
#include <cmath>

#include "qct/error.hpp"
#include "qct/synth.hpp"

namespace qct {

namespace {

Mat magic_basis() {
    const double r = 1.0 / std::sqrt(2.0);
    Mat m(4, 4);
    m << r, 0, 0, cxd(0, r),
        0, cxd(0, r), r, 0,
        0, cxd(0, r), -r, 0,
        r, 0, 0, cxd(0, -r);
    return m;
}

// theta_k = S * (x, y, z, d): signs of XX, YY, ZZ on the magic-basis diagonal
constexpr double kSign[4][4] = {
    {1, -1, 1, 1},
    {1, 1, -1, 1},
    {-1, -1, -1, 1},
    {-1, 1, 1, 1},
};

Mat cx_matrix() {
    Mat m = Mat::Zero(4, 4);
    m(0, 0) = 1;
    m(3, 1) = 1;
    m(2, 2) = 1;
    m(1, 3) = 1;
    return m;
}

Mat cz_matrix() {
    Mat m = Mat::Identity(4, 4);
    m(3, 3) = -1;
    return m;
}

// embed a single-qubit operator on qubit 1 (high bit)
Mat on1(const Mat& m) { return kron(m, Mat::Identity(2, 2)); }

// P real orthogonal with P^T m P diagonal, for m symmetric unitary.
std::pair<Eigen::Matrix4d, Vec> joint_diagonalize(const Mat& m) {
    const Eigen::Matrix4d a = m.real();
    const Eigen::Matrix4d b = m.imag();
    for (int k = 0; k < 64; ++k) {
        const double t = std::fmod(0.7548776662466927 * (k + 1), 1.0) * kPi;
        const Eigen::Matrix4d c = a * std::cos(t) + b * std::sin(t);
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(c);
        const Eigen::Matrix4d p = es.eigenvectors();
        Mat d = p.transpose() * m * p;
        double off = 0;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                if (i != j) off = std::max(off, std::abs(d(i, j)));
        if (off < 1e-9) {
            Vec diag(4);
            for (int i = 0; i < 4; ++i) diag(i) = d(i, i);
            return {p, diag};
        }
    }
    throw Error(Errc::not_unitary, "failed to diagonalize the canonical form");
}

struct RawKak {
    Mat k1, k2;  // 4x4 locals
    double phase = 0;
    std::array<double, 3> v{};
};

RawKak analyze_raw(const Mat& u) {
    static const Mat mag = magic_basis();
    static const Mat mag_dag = magic_basis().adjoint();

    const cxd det = u.determinant();
    const double d0 = std::arg(det) / 4.0;
    const Mat u_su = std::polar(1.0, -d0) * u;

    const Mat q = mag_dag * u_su * mag;
    const Mat m = q.transpose() * q;
    auto [p, diag] = joint_diagonalize(m);

    // order columns by eigenvalue angle descending, lexicographic tie-break
    std::array<int, 4> order{0, 1, 2, 3};
    std::sort(order.begin(), order.end(), [&](int lhs, int rhs) {
        const double al = std::arg(diag(lhs)), ar = std::arg(diag(rhs));
        if (std::abs(al - ar) > 1e-12) return al > ar;
        for (int r = 0; r < 4; ++r) {
            if (std::abs(p(r, lhs) - p(r, rhs)) > 1e-12) return p(r, lhs) < p(r, rhs);
        }
        return lhs < rhs;
    });
    Eigen::Matrix4d ps;
    Vec ds(4);
    for (int c = 0; c < 4; ++c) {
        ps.col(c) = p.col(order[static_cast<size_t>(c)]);
        ds(c) = diag(order[static_cast<size_t>(c)]);
    }
    if (ps.determinant() < 0) ps.col(3) = -ps.col(3);

    std::array<double, 4> theta;
    for (int k = 0; k < 4; ++k) theta[static_cast<size_t>(k)] = std::arg(ds(k)) / 2.0;
    double theta_sum = theta[0] + theta[1] + theta[2] + theta[3];
    if (std::cos(theta_sum) < 0) {
        theta[0] += kPi;  // det(Lambda) must be +1
        theta_sum += kPi;
    }

    Vec lam(4);
    for (int k = 0; k < 4; ++k) lam(k) = std::polar(1.0, theta[static_cast<size_t>(k)]);
    Vec lam_inv(4);
    for (int k = 0; k < 4; ++k) lam_inv(k) = std::conj(lam(k));
    Mat q1 = q * ps.cast<cxd>() * lam_inv.asDiagonal();
    const Mat q2 = ps.transpose().cast<cxd>();

    // invert theta = S (x, y, z, d): S^{-1} = S^T / 4
    std::array<double, 4> xyzd{};
    for (int c = 0; c < 4; ++c) {
        double acc = 0;
        for (int r = 0; r < 4; ++r) acc += kSign[r][c] * theta[static_cast<size_t>(r)];
        xyzd[static_cast<size_t>(c)] = acc / 4.0;
    }

    RawKak out;
    out.k1 = mag * q1 * mag_dag;
    out.k2 = mag * q2 * mag_dag;
    out.phase = d0 + xyzd[3];
    out.v = {xyzd[0], xyzd[1], xyzd[2]};
    return out;
}

const Mat& pauli(int axis) {
    static const Mat px = pauli_x(), py = pauli_y(), pz = pauli_z();
    return axis == 0 ? px : (axis == 1 ? py : pz);
}

// L with (L x L) conj swapping canonical axes j<->k (no sign changes)
Mat swap_local(int j, int k) {
    const int lo = std::min(j, k), hi = std::max(j, k);
    if (lo == 0 && hi == 1) return rot_z(kPi / 2);
    if (lo == 1 && hi == 2) return rot_x(kPi / 2);
    return rot_y(kPi / 2);
}

// Pauli whose one-sided conjugation flips the signs of axes j and k
const Mat& flip_pauli(int j, int k) {
    const int lo = std::min(j, k), hi = std::max(j, k);
    if (lo == 0 && hi == 1) return pauli(2);
    if (lo == 0 && hi == 2) return pauli(1);
    return pauli(0);
}

void weyl_normalize(RawKak& r) {
    auto& v = r.v;
    auto shift = [&](int k, int n) {
        if (n == 0) return;
        v[static_cast<size_t>(k)] -= n * kPi / 2;
        r.phase += n * kPi / 2;
        if (n & 1) r.k2 = kron(pauli(k), pauli(k)) * r.k2;
    };
    auto do_swap = [&](int j, int k) {
        const Mat ll = kron(swap_local(j, k), swap_local(j, k));
        r.k1 = r.k1 * ll.adjoint();
        r.k2 = ll * r.k2;
        std::swap(v[static_cast<size_t>(j)], v[static_cast<size_t>(k)]);
    };
    auto do_flip = [&](int j, int k) {
        const Mat pp = on1(flip_pauli(j, k));
        r.k1 = r.k1 * pp;
        r.k2 = pp * r.k2;
        v[static_cast<size_t>(j)] = -v[static_cast<size_t>(j)];
        v[static_cast<size_t>(k)] = -v[static_cast<size_t>(k)];
    };

    for (int k = 0; k < 3; ++k) {
        const int n = static_cast<int>(std::lround(v[static_cast<size_t>(k)] / (kPi / 2)));
        shift(k, n);
        if (v[static_cast<size_t>(k)] <= -kPi / 4 + 1e-14) shift(k, -1);
    }
    for (int i = 0; i < 3; ++i) {
        int big = i;
        for (int k = i + 1; k < 3; ++k)
            if (std::abs(v[static_cast<size_t>(k)]) > std::abs(v[static_cast<size_t>(big)])) big = k;
        if (big != i) do_swap(i, big);
    }
    if (v[0] < 0) do_flip(0, 2);
    if (v[1] < 0) do_flip(1, 2);
    if (v[2] < -1e-12 && v[0] >= kPi / 4 - 1e-12) {
        shift(0, 1);
        do_flip(0, 2);
    }
}

RawKak analyze_normalized(const Mat& u) {
    RawKak r = analyze_raw(u);
    weyl_normalize(r);
    return r;
}

// locals (la, lb) with m = la * CX * lb; m must be in the cx canonical class
std::pair<Mat, Mat> one_cnot_factor(const Mat& m) {
    static const RawKak cx_kak = analyze_normalized(cx_matrix());
    const RawKak r = analyze_normalized(m);
    const Mat la = std::polar(1.0, r.phase - cx_kak.phase) * r.k1 * cx_kak.k1.adjoint();
    const Mat lb = cx_kak.k2.adjoint() * r.k2;
    return {la, lb};
}

// append `m` as (at most) two single-qubit custom gates
void append_local(Circuit& out, const Mat& m) {
    auto [a1, a0] = kron_factor(m, 2, 2);  // a1 on qubit 1, a0 on qubit 0
    if ((a0 - Mat::Identity(2, 2)).cwiseAbs().maxCoeff() > 1e-13)
        out.append(Gate::custom(a0, {0}));
    if ((a1 - Mat::Identity(2, 2)).cwiseAbs().maxCoeff() > 1e-13)
        out.append(Gate::custom(a1, {1}));
}

// merge runs of single-qubit gates between two-qubit gates
Circuit compact_1q(const Circuit& c) {
    Circuit out(c.num_qubits);
    std::vector<Mat> pending(static_cast<size_t>(c.num_qubits));
    std::vector<bool> has(static_cast<size_t>(c.num_qubits), false);
    auto flush = [&](int q) {
        if (!has[static_cast<size_t>(q)]) return;
        const Mat& m = pending[static_cast<size_t>(q)];
        if ((m - Mat::Identity(2, 2)).cwiseAbs().maxCoeff() > 1e-13)
            out.append(Gate::custom(m, {q}));
        has[static_cast<size_t>(q)] = false;
    };
    for (const Gate& g : c.gates) {
        if (g.arity() == 1 && g.kind != GateKind::measure) {
            auto& slot = pending[static_cast<size_t>(g.qubits[0])];
            slot = has[static_cast<size_t>(g.qubits[0])] ? Mat(g.local_matrix() * slot)
                                                         : g.local_matrix();
            has[static_cast<size_t>(g.qubits[0])] = true;
            continue;
        }
        for (int q : g.qubits) flush(q);
        out.append(g);
    }
    for (int q = 0; q < c.num_qubits; ++q) flush(q);
    return out;
}

}  // namespace

KakDecomposition kak_analyze(const Mat& u) {
    if (u.rows() != 4 || u.cols() != 4)
        throw Error(Errc::dimension_mismatch, "expected a 4x4 matrix");
    if (!is_unitary(u)) throw Error(Errc::not_unitary, "expected a unitary matrix");
    RawKak r = analyze_normalized(u);
    KakDecomposition out;
    out.x = r.v[0];
    out.y = r.v[1];
    out.z = r.v[2];
    auto [a1, a0] = kron_factor(r.k1, 2, 2);
    auto [b1, b0] = kron_factor(r.k2, 2, 2);
    out.a0 = a0;
    out.a1 = a1;
    out.b0 = b0;
    out.b1 = b1;
    // phases lost in the kron factors fold into the global phase
    const Mat k1_rec = kron(a1, a0);
    const Mat k2_rec = kron(b1, b0);
    Eigen::Index i1, j1, i2, j2;
    r.k1.cwiseAbs().maxCoeff(&i1, &j1);
    r.k2.cwiseAbs().maxCoeff(&i2, &j2);
    out.phase = r.phase + std::arg(r.k1(i1, j1) / k1_rec(i1, j1)) +
                std::arg(r.k2(i2, j2) / k2_rec(i2, j2));
    return out;
}

Circuit kak_decompose(const Mat& u) {
    if (u.rows() != 4 || u.cols() != 4)
        throw Error(Errc::dimension_mismatch, "expected a 4x4 matrix");
    if (!is_unitary(u)) throw Error(Errc::not_unitary, "expected a unitary matrix");

    const RawKak r = analyze_normalized(u);
    const double x = r.v[0], y = r.v[1], z = r.v[2];
    const double tol = 2e-10;

    Circuit staged(2);

    if (std::abs(x) < tol && std::abs(y) < tol && std::abs(z) < tol) {
        append_local(staged, r.k1 * r.k2);
        return compact_1q(staged);
    }

    if (std::abs(x - kPi / 4) < tol && std::abs(y) < tol && std::abs(z) < tol) {
        auto [la, lb] = one_cnot_factor(u);
        append_local(staged, lb);
        staged.append(Gate(GateKind::cx, {0, 1}));
        append_local(staged, la);
        return compact_1q(staged);
    }

    if (std::abs(z) < tol) {
        // template: CX . e^{ixX_0} e^{iyZ_1} . CX, canonical class (x, y, 0)
        Circuit t(2);
        t.append(Gate(GateKind::cx, {0, 1}));
        t.append(Gate(GateKind::rx, {0}, {-2 * x}));
        t.append(Gate(GateKind::rz, {1}, {-2 * y}));
        t.append(Gate(GateKind::cx, {0, 1}));
        const Mat tmat = compose_unitary(t).m;
        const RawKak rt = analyze_normalized(tmat);
        append_local(staged, rt.k2.adjoint() * r.k2);
        staged.append(t);
        append_local(staged, std::polar(1.0, r.phase - rt.phase) * r.k1 * rt.k1.adjoint());
        return compact_1q(staged);
    }

    // exact identity:
    //   W(x,y,z) = CX . e^{izZ_1} e^{ixX_0} . CZ . e^{-iyX_0} . (CZ CX)
    static const std::pair<Mat, Mat> bfac = one_cnot_factor(cz_matrix() * cx_matrix());
    append_local(staged, r.k2);
    append_local(staged, bfac.second);
    staged.append(Gate(GateKind::cx, {0, 1}));
    append_local(staged, bfac.first);
    staged.append(Gate(GateKind::rx, {0}, {2 * y}));
    staged.append(Gate(GateKind::h, {1}));
    staged.append(Gate(GateKind::cx, {0, 1}));
    staged.append(Gate(GateKind::h, {1}));
    staged.append(Gate(GateKind::rx, {0}, {-2 * x}));
    staged.append(Gate(GateKind::rz, {1}, {-2 * z}));
    staged.append(Gate(GateKind::cx, {0, 1}));
    append_local(staged, r.k1);
    return compact_1q(staged);
}

}  // namespace qct
