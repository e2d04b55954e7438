#include <algorithm>
#include <bit>
#include <cmath>

#include "qct/error.hpp"
#include "qct/synth.hpp"

namespace qct {

Mat TwoLevelFactor::expanded() const {
    Mat m = Mat::Identity(dim, dim);
    m(i, i) = block(0, 0);
    m(i, j) = block(0, 1);
    m(j, i) = block(1, 0);
    m(j, j) = block(1, 1);
    return m;
}

std::vector<TwoLevelFactor> two_level_decompose(const Mat& u) {
    if (!is_unitary(u)) throw Error(Errc::not_unitary, "two-level splitting needs a unitary input");
    const int d = static_cast<int>(u.rows());
    if (d > 64) throw Error(Errc::dimension_too_large, "two-level splitting supports dim <= 64");
    if (d < 2) throw Error(Errc::dimension_mismatch, "dimension must be at least 2");

    Mat v = u;
    std::vector<TwoLevelFactor> factors;  // U = F_1 F_2 ... F_k

    auto apply_left = [&](int a, int b, const Mat& g) {
        // v <- G v on rows a, b
        for (int col = 0; col < d; ++col) {
            const cxd va = v(a, col), vb = v(b, col);
            v(a, col) = g(0, 0) * va + g(0, 1) * vb;
            v(b, col) = g(1, 0) * va + g(1, 1) * vb;
        }
    };

    for (int c = 0; c + 2 < d; ++c) {
        for (int r = c + 1; r < d; ++r) {
            if (std::abs(v(r, c)) < 1e-14) continue;
            const cxd a = v(c, c), b = v(r, c);
            const double n = std::sqrt(std::norm(a) + std::norm(b));
            Mat g(2, 2);
            g << std::conj(a) / n, std::conj(b) / n, b / n, -a / n;
            apply_left(c, r, g);
            TwoLevelFactor f{d, c, r, g.adjoint()};
            factors.push_back(std::move(f));
        }
        // unitarity leaves a pure phase on the diagonal once the column is clean
        if (std::abs(v(c, c) - cxd(1, 0)) > 1e-13) {
            const double alpha = std::arg(v(c, c));
            Mat g(2, 2);
            g << std::polar(1.0, -alpha), 0, 0, 1;
            apply_left(c, c + 1, g);
            // the (c+1) row is multiplied by 1, so this stays two-level
            Mat binv(2, 2);
            binv << std::polar(1.0, alpha), 0, 0, 1;
            factors.push_back({d, c, c + 1, binv});
        }
    }
    // remaining 2x2 corner
    Mat corner(2, 2);
    corner << v(d - 2, d - 2), v(d - 2, d - 1), v(d - 1, d - 2), v(d - 1, d - 1);
    if ((corner - Mat::Identity(2, 2)).cwiseAbs().maxCoeff() > 1e-13)
        factors.push_back({d, d - 2, d - 1, corner});
    return factors;
}

Mat make_controlled(const Mat& u2, int n_controls) {
    const int dim = 1 << (n_controls + 1);
    Mat m = Mat::Identity(dim, dim);
    const int all_controls = ((1 << n_controls) - 1) << 1;
    m(all_controls, all_controls) = u2(0, 0);
    m(all_controls, all_controls | 1) = u2(0, 1);
    m(all_controls | 1, all_controls) = u2(1, 0);
    m(all_controls | 1, all_controls | 1) = u2(1, 1);
    return m;
}

namespace {

struct McuLayer {
    Mat u2;
    int target = 0;
    std::vector<std::pair<int, bool>> controls;  // (qubit, required value)
};

// Gray-code chain moving basis state i next to j, then one multi-controlled
// block on the differing bit.
std::vector<McuLayer> two_level_layers(const TwoLevelFactor& f, int n_qubits) {
    std::vector<McuLayer> layers;
    const int i = f.i, j = f.j;
    int diff = i ^ j;
    const int target_bit = diff & -diff;  // lowest differing bit carries the block
    const int target = std::countr_zero(static_cast<unsigned>(target_bit));

    auto controls_for = [&](int state, int flip_bit) {
        std::vector<std::pair<int, bool>> cs;
        for (int q = 0; q < n_qubits; ++q) {
            if ((1 << q) == flip_bit) continue;
            cs.emplace_back(q, (state >> q) & 1);
        }
        return cs;
    };

    // flip the other differing bits one at a time: i -> ... -> g with g^j == target_bit
    std::vector<int> chain;
    int current = i;
    for (int q = 0; q < n_qubits; ++q) {
        const int bit = 1 << q;
        if ((diff & bit) && bit != target_bit) {
            layers.push_back({pauli_x(), q, controls_for(current, bit)});
            chain.push_back(static_cast<int>(layers.size()) - 1);
            current ^= bit;
        }
    }

    McuLayer mid;
    mid.target = target;
    mid.controls = controls_for(current, target_bit);
    if ((current >> target) & 1) {
        // |current> plays the role of row j of the block
        Mat swapped(2, 2);
        swapped << f.block(1, 1), f.block(1, 0), f.block(0, 1), f.block(0, 0);
        mid.u2 = swapped;
    } else {
        mid.u2 = f.block;
    }
    layers.push_back(std::move(mid));

    // undo the chain
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) layers.push_back(layers[static_cast<size_t>(*it)]);
    return layers;
}

void append_layer(Circuit& out, const McuLayer& layer) {
    std::vector<int> zero_controls;
    for (const auto& [q, val] : layer.controls)
        if (!val) zero_controls.push_back(q);
    for (int q : zero_controls) out.append(Gate(GateKind::x, {q}));
    std::vector<int> qubits{layer.target};
    for (const auto& [q, val] : layer.controls) qubits.push_back(q);
    if (layer.controls.empty())
        out.append(Gate::custom(layer.u2, qubits));
    else
        out.append(Gate::custom(make_controlled(layer.u2, static_cast<int>(layer.controls.size())), qubits));
    for (int q : zero_controls) out.append(Gate(GateKind::x, {q}));
}

bool is_power_of_two(int d) { return d > 0 && (d & (d - 1)) == 0; }

}  // namespace

Circuit two_level_to_multicontrolled(const TwoLevelFactor& factor, int n_qubits) {
    if (factor.dim != (1 << n_qubits))
        throw Error(Errc::dimension_mismatch, "factor dimension must be 2^n_qubits");
    Circuit out(n_qubits);
    for (const McuLayer& layer : two_level_layers(factor, n_qubits)) append_layer(out, layer);
    return out;
}

Circuit multicontrolled_to_cnot(const Mat& u2, int n_controls) {
    if (!is_unitary(u2) || u2.rows() != 2)
        throw Error(Errc::not_unitary, "expected a 2x2 unitary block");
    if (n_controls < 0) throw Error(Errc::invalid_input, "n_controls must be >= 0");

    Circuit out(std::max(n_controls + 1, 1));
    if (n_controls == 0) {
        out.append(Gate::custom(u2, {0}));
        return out;
    }
    if (n_controls == 1) {
        if ((u2 - pauli_x()).cwiseAbs().maxCoeff() < 1e-12)
            out.append(Gate(GateKind::cx, {1, 0}));
        else
            out.append(Gate::custom(make_controlled(u2, 1), {0, 1}));
        return out;
    }

    // C^n-U = C-V(c_n,t) . C^{n-1}-X(c_1..c_{n-1} -> c_n) . C-V+(c_n,t)
    //         . C^{n-1}-X . C^{n-1}-V(c_1..c_{n-1} -> t),   V = sqrt(U)
    const Mat v = unitary_sqrt(u2);
    const int cn = n_controls;  // last control qubit

    auto remap = [&](const Circuit& c, const std::vector<int>& map) {
        for (const Gate& g : c.gates) {
            Gate moved = g;
            for (auto& q : moved.qubits) q = map[static_cast<size_t>(q)];
            out.append(std::move(moved));
        }
    };

    Circuit cv = multicontrolled_to_cnot(v, 1);
    Circuit cvdg = multicontrolled_to_cnot(v.adjoint(), 1);
    Circuit cx_chain = multicontrolled_to_cnot(pauli_x(), n_controls - 1);
    Circuit cv_chain = multicontrolled_to_cnot(v, n_controls - 1);

    std::vector<int> map_cv{0, cn};  // target, control c_n
    std::vector<int> map_chain_to_cn{cn};  // target c_n, controls c_1..c_{n-1}
    std::vector<int> map_chain_to_t{0};
    for (int c = 1; c < n_controls; ++c) {
        map_chain_to_cn.push_back(c);
        map_chain_to_t.push_back(c);
    }

    remap(cv, map_cv);
    remap(cx_chain, map_chain_to_cn);
    remap(cvdg, map_cv);
    remap(cx_chain, map_chain_to_cn);
    remap(cv_chain, map_chain_to_t);
    return out;
}

Circuit controlled_u_to_basic(const Mat& u2) {
    if (!is_unitary(u2) || u2.rows() != 2)
        throw Error(Errc::not_unitary, "expected a 2x2 unitary block");
    Circuit out(2);
    if ((u2 - pauli_x()).cwiseAbs().maxCoeff() < 1e-12) {
        out.append(Gate(GateKind::cx, {1, 0}));
        return out;
    }

    // u2 = e^{i alpha} Rz(beta) Ry(gamma) Rz(delta)
    const double alpha = std::arg(u2.determinant()) / 2.0;
    const Mat su = std::polar(1.0, -alpha) * u2;
    const double gamma = 2.0 * std::atan2(std::abs(su(1, 0)), std::abs(su(0, 0)));
    double sum, diffr;  // beta+delta, beta-delta
    if (std::abs(su(0, 0)) > 1e-12)
        sum = -2.0 * std::arg(su(0, 0));
    else
        sum = 0.0;
    if (std::abs(su(1, 0)) > 1e-12)
        diffr = 2.0 * std::arg(su(1, 0));
    else
        diffr = 0.0;
    const double beta = (sum + diffr) / 2.0, delta = (sum - diffr) / 2.0;

    const Mat a = rot_z(beta) * rot_y(gamma / 2);
    const Mat b = rot_y(-gamma / 2) * rot_z(-(delta + beta) / 2);
    const Mat c = rot_z((delta - beta) / 2);

    auto append_1q = [&out](const Mat& m, int q) {
        if ((m - Mat::Identity(2, 2)).cwiseAbs().maxCoeff() > 1e-13)
            out.append(Gate::custom(m, {q}));
    };
    append_1q(c, 0);
    out.append(Gate(GateKind::cx, {1, 0}));
    append_1q(b, 0);
    out.append(Gate(GateKind::cx, {1, 0}));
    append_1q(a, 0);
    if (std::abs(alpha) > 1e-13) out.append(Gate(GateKind::u3, {1}, {0.0, 0.0, alpha}));
    return out;
}

Circuit synthesize_exact(const Mat& u) {
    if (!is_unitary(u)) throw Error(Errc::not_unitary, "synthesis needs a unitary input");
    const int d = static_cast<int>(u.rows());
    if (!is_power_of_two(d) || d < 2)
        throw Error(Errc::dimension_mismatch, "dimension must be a power of two");
    const int n = std::countr_zero(static_cast<unsigned>(d));

    if (n == 1) {
        Circuit out(1);
        out.append(Gate::custom(u, {0}));
        return out;
    }
    if (n == 2) return kak_decompose(u);
    if (n > 6) throw Error(Errc::dimension_too_large, "exact synthesis supports at most 6 qubits");

    Circuit staged(n);
    const auto factors = two_level_decompose(u);
    // product F1 F2 ... Fk = u, so Fk acts first in circuit order
    for (auto it = factors.rbegin(); it != factors.rend(); ++it)
        staged.append(two_level_to_multicontrolled(*it, n));

    // expand the multi-controlled customs down to cx + controlled-1q,
    // then controlled-1q down to cx + 1q
    Circuit out(n);
    for (const Gate& g : staged.gates) {
        if (g.kind != GateKind::custom || g.arity() <= 1) {
            out.append(g);
            continue;
        }
        const int n_controls = g.arity() - 1;
        Mat u2(2, 2);
        {
            const Mat& m = *g.matrix;
            const int base = ((1 << n_controls) - 1) << 1;
            u2 << m(base, base), m(base, base | 1), m(base | 1, base), m(base | 1, base | 1);
        }
        Circuit chain = multicontrolled_to_cnot(u2, n_controls);
        for (const Gate& cg : chain.gates) {
            Gate moved = cg;
            for (auto& q : moved.qubits) q = g.qubits[static_cast<size_t>(q)];
            if (moved.kind == GateKind::custom && moved.arity() == 2) {
                // controlled single-qubit gate -> ABC
                Mat v2(2, 2);
                const Mat& m = *moved.matrix;
                v2 << m(2, 2), m(2, 3), m(3, 2), m(3, 3);
                Circuit abc = controlled_u_to_basic(v2);
                for (const Gate& ag : abc.gates) {
                    Gate amoved = ag;
                    for (auto& q : amoved.qubits) q = moved.qubits[static_cast<size_t>(q)];
                    out.append(std::move(amoved));
                }
            } else {
                out.append(std::move(moved));
            }
        }
    }
    return out;
}

Circuit rebase_to_u3(const Circuit& c) {
    Circuit out(c.num_qubits);
    for (const Gate& g : c.gates) {
        if (g.kind != GateKind::custom) {
            out.append(g);
            continue;
        }
        if (g.arity() != 1)
            throw Error(Errc::invalid_gate, "cannot rebase a multi-qubit custom gate");
        const auto [theta, phi, lambda, phase] = u3_angles(*g.matrix);
        out.append(Gate(GateKind::u3, g.qubits, {theta, phi, lambda}));
    }
    return out;
}

}  // namespace qct
