#pragma once

#include "qct/circuit.hpp"

namespace qct {

// Unitary block acting on two basis states (i, j) of a dim-dimensional space,
// identity elsewhere.
struct TwoLevelFactor {
    int dim = 2;
    int i = 0, j = 1;  // i < j
    Mat block;         // 2x2

    Mat expanded() const;
};

// Gaussian-elimination style splitting: the product of the expanded factors,
// in returned order, equals u. At most dim*(dim-1)/2 factors.
std::vector<TwoLevelFactor> two_level_decompose(const Mat& u);

// Realizes a two-level factor as Gray-code X conjugation around one
// multi-controlled single-qubit gate. Multi-controlled pieces appear as
// custom gates carrying the full controlled matrix, listed [target,
// controls...]; plain x gates wrap controls that condition on |0>.
Circuit two_level_to_multicontrolled(const TwoLevelFactor& factor, int n_qubits);

// C^n-U over cx plus controlled single-qubit gates via the square-root
// recursion. Qubits: target q0, controls q1..q_{n_controls}. Controlled
// single-qubit gates are custom gates on [target, control].
Circuit multicontrolled_to_cnot(const Mat& u2, int n_controls);

// C-U as exactly two cx plus at most four single-qubit gates (identity
// factors skipped). Qubits: target q0, control q1. A plain C-X collapses to
// one cx.
Circuit controlled_u_to_basic(const Mat& u2);

// Canonical two-qubit coordinates and local factors:
//   u = e^{i phase} (a1 on q1 x a0 on q0) W(x,y,z) (b1 on q1 x b0 on q0)
// with W(x,y,z) = exp(i(x XX + y YY + z ZZ)) and pi/4 >= x >= y >= |z|
// (z >= 0 when x = pi/4).
struct KakDecomposition {
    double phase = 0.0;
    Mat a0, a1;  // left locals (applied last)
    Mat b0, b1;  // right locals (applied first)
    double x = 0, y = 0, z = 0;
};

KakDecomposition kak_analyze(const Mat& u);

// <= 3 cx and <= 15 single-qubit gates, matching u up to global phase.
// Tensor products need none, cx-class inputs need one, z ~ 0 needs two.
Circuit kak_decompose(const Mat& u);

// Full exact synthesis to {x, cx, custom 1q}: dim 2 emits one gate, dim 4
// goes through the canonical route, larger powers of two run the two-level /
// multi-controlled / basic-gate chain.
Circuit synthesize_exact(const Mat& u);

// Rewrites every custom single-qubit gate as u3 (drops its global phase; the
// circuit as a whole stays correct up to one overall phase). Custom
// multi-qubit gates are rejected.
Circuit rebase_to_u3(const Circuit& c);

// Controlled matrix over [target = local bit 0, controls = local bits
// 1..n_controls], all controls conditioning on |1>.
Mat make_controlled(const Mat& u2, int n_controls);

}  // namespace qct
