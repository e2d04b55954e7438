#include "qct/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <set>

#include "qct/error.hpp"

namespace qct {

namespace {

constexpr std::string_view kNames[] = {"h",  "x",  "y",  "z",  "s",    "sdg",
                                       "t",  "tdg", "rx", "ry", "rz",   "u3",
                                       "cx", "cz",  "swap", "measure", "custom"};

}  // namespace

std::string_view gate_name(GateKind k) { return kNames[static_cast<int>(k)]; }

std::optional<GateKind> gate_kind_from_name(std::string_view name) {
    for (int i = 0; i < static_cast<int>(std::size(kNames)); ++i)
        if (kNames[i] == name) return static_cast<GateKind>(i);
    return std::nullopt;
}

int gate_arity(GateKind k) {
    switch (k) {
        case GateKind::cx:
        case GateKind::cz:
        case GateKind::swap:
            return 2;
        case GateKind::custom:
            return -1;
        default:
            return 1;
    }
}

int gate_param_count(GateKind k) {
    switch (k) {
        case GateKind::rx:
        case GateKind::ry:
        case GateKind::rz:
            return 1;
        case GateKind::u3:
            return 3;
        default:
            return 0;
    }
}

Gate::Gate(GateKind k, std::vector<int> qs, std::vector<double> ps)
    : kind(k), qubits(std::move(qs)), params(std::move(ps)) {
    if (kind == GateKind::custom)
        throw Error(Errc::invalid_gate, "custom gates need a matrix; use Gate::custom");
    const int want = gate_arity(kind);
    if (static_cast<int>(qubits.size()) != want)
        throw Error(Errc::invalid_gate,
                    name() + " expects " + std::to_string(want) + " qubit(s)");
    if (static_cast<int>(params.size()) != gate_param_count(kind))
        throw Error(Errc::invalid_gate,
                    name() + " expects " + std::to_string(gate_param_count(kind)) +
                        " parameter(s)");
    std::set<int> distinct(qubits.begin(), qubits.end());
    if (distinct.size() != qubits.size())
        throw Error(Errc::invalid_gate, "repeated qubit index in " + name());
    for (int q : qubits)
        if (q < 0) throw Error(Errc::index_out_of_range, "negative qubit index");
}

Gate Gate::custom(Mat m, std::vector<int> qs) {
    Gate g;
    g.kind = GateKind::custom;
    g.qubits = std::move(qs);
    if (g.qubits.empty()) throw Error(Errc::invalid_gate, "custom gate needs qubits");
    std::set<int> distinct(g.qubits.begin(), g.qubits.end());
    if (distinct.size() != g.qubits.size())
        throw Error(Errc::invalid_gate, "repeated qubit index in custom gate");
    for (int q : g.qubits)
        if (q < 0) throw Error(Errc::index_out_of_range, "negative qubit index");
    const Eigen::Index want = Eigen::Index(1) << g.qubits.size();
    if (m.rows() != want || m.cols() != want)
        throw Error(Errc::invalid_gate, "custom matrix dimension must be 2^(qubit count)");
    if (!is_unitary(m))
        throw Error(Errc::not_unitary, "custom gate matrix is not unitary");
    g.matrix = std::make_shared<const Mat>(std::move(m));
    return g;
}

Mat Gate::local_matrix() const {
    switch (kind) {
        case GateKind::h: {
            Mat m(2, 2);
            const double r = 1.0 / std::sqrt(2.0);
            m << r, r, r, -r;
            return m;
        }
        case GateKind::x: return pauli_x();
        case GateKind::y: return pauli_y();
        case GateKind::z: return pauli_z();
        case GateKind::s: {
            Mat m = Mat::Identity(2, 2);
            m(1, 1) = cxd(0, 1);
            return m;
        }
        case GateKind::sdg: {
            Mat m = Mat::Identity(2, 2);
            m(1, 1) = cxd(0, -1);
            return m;
        }
        case GateKind::t: {
            Mat m = Mat::Identity(2, 2);
            m(1, 1) = std::polar(1.0, kPi / 4);
            return m;
        }
        case GateKind::tdg: {
            Mat m = Mat::Identity(2, 2);
            m(1, 1) = std::polar(1.0, -kPi / 4);
            return m;
        }
        case GateKind::rx: return rot_x(params[0]);
        case GateKind::ry: return rot_y(params[0]);
        case GateKind::rz: return rot_z(params[0]);
        case GateKind::u3: return u3_matrix(params[0], params[1], params[2]);
        case GateKind::cx: {
            Mat m = Mat::Zero(4, 4);
            // local bit 0 = control, bit 1 = target
            m(0, 0) = 1;
            m(3, 1) = 1;
            m(2, 2) = 1;
            m(1, 3) = 1;
            return m;
        }
        case GateKind::cz: {
            Mat m = Mat::Identity(4, 4);
            m(3, 3) = -1;
            return m;
        }
        case GateKind::swap: {
            Mat m = Mat::Zero(4, 4);
            m(0, 0) = 1;
            m(2, 1) = 1;
            m(1, 2) = 1;
            m(3, 3) = 1;
            return m;
        }
        case GateKind::measure:
            throw Error(Errc::measure_in_unitary, "measure has no unitary matrix");
        case GateKind::custom:
            return *matrix;
    }
    throw Error(Errc::invalid_gate, "unreachable");
}

Circuit::Circuit(int n) : num_qubits(n) {
    if (n <= 0) throw Error(Errc::invalid_gate, "num_qubits must be positive");
}

void Circuit::append(Gate g) {
    for (int q : g.qubits)
        if (q >= num_qubits)
            throw Error(Errc::index_out_of_range,
                        "qubit " + std::to_string(q) + " outside register of size " +
                            std::to_string(num_qubits));
    gates.push_back(std::move(g));
}

void Circuit::append(const Circuit& other) {
    for (const Gate& g : other.gates) append(g);
}

bool Circuit::has_measure() const {
    return std::any_of(gates.begin(), gates.end(),
                       [](const Gate& g) { return g.kind == GateKind::measure; });
}

UnitaryMatrix::UnitaryMatrix(Mat mat, double tol) : m(std::move(mat)) {
    if (m.rows() != m.cols() || m.rows() == 0)
        throw Error(Errc::not_unitary, "matrix is not square");
    if (unitarity_residual(m) > tol)
        throw Error(Errc::not_unitary, "U^dagger U differs from identity");
    if (std::abs(std::abs(m.determinant()) - 1.0) > tol)
        throw Error(Errc::not_unitary, "|det| differs from 1");
}

UnitaryMatrix UnitaryMatrix::trusted(Mat mat) {
    UnitaryMatrix u;
    u.m = std::move(mat);
    return u;
}

void apply_gate(Mat& columns, const Gate& g, int num_qubits) {
    const Mat local = g.local_matrix();
    const int k = g.arity();
    const Eigen::Index dim = columns.rows();
    const int lk = 1 << k;

    std::uint64_t gate_mask = 0;
    for (int q : g.qubits) {
        if (q >= num_qubits) throw Error(Errc::index_out_of_range, "gate qubit out of range");
        gate_mask |= (1ULL << q);
    }

    std::vector<cxd> in(static_cast<size_t>(lk)), out(static_cast<size_t>(lk));
    std::vector<std::uint64_t> offsets(static_cast<size_t>(lk));
    for (int lb = 0; lb < lk; ++lb) {
        std::uint64_t off = 0;
        for (int j = 0; j < k; ++j)
            if (lb & (1 << j)) off |= (1ULL << g.qubits[static_cast<size_t>(j)]);
        offsets[static_cast<size_t>(lb)] = off;
    }

    for (Eigen::Index col = 0; col < columns.cols(); ++col) {
        cxd* data = columns.col(col).data();
        for (std::uint64_t base = 0; base < static_cast<std::uint64_t>(dim); ++base) {
            if (base & gate_mask) continue;
            for (int lb = 0; lb < lk; ++lb) in[static_cast<size_t>(lb)] = data[base | offsets[static_cast<size_t>(lb)]];
            for (int r = 0; r < lk; ++r) {
                cxd acc(0, 0);
                for (int cidx = 0; cidx < lk; ++cidx) acc += local(r, cidx) * in[static_cast<size_t>(cidx)];
                out[static_cast<size_t>(r)] = acc;
            }
            for (int lb = 0; lb < lk; ++lb) data[base | offsets[static_cast<size_t>(lb)]] = out[static_cast<size_t>(lb)];
        }
    }
}

UnitaryMatrix compose_unitary(const Circuit& c) {
    if (c.num_qubits > 12)
        throw Error(Errc::dimension_too_large,
                    "dense composition supports at most 12 qubits, got " +
                        std::to_string(c.num_qubits));
    if (c.has_measure())
        throw Error(Errc::measure_in_unitary, "circuit contains measure gates");
    const Eigen::Index dim = Eigen::Index(1) << c.num_qubits;
    Mat u = Mat::Identity(dim, dim);
    for (const Gate& g : c.gates) apply_gate(u, g, c.num_qubits);
    return UnitaryMatrix::trusted(std::move(u));
}

double distance(const Mat& u, const Mat& v) {
    if (u.rows() != v.rows() || u.cols() != v.cols() || u.rows() != u.cols())
        throw Error(Errc::dimension_mismatch, "distance requires equal square dimensions");
    const Mat w = v.adjoint() * u;
    if (is_unitary(u, 1e-8) && is_unitary(v, 1e-8)) {
        // Singular values of u - e^{i phi} v are |e^{i theta_k} - e^{i phi}|
        // with theta_k the eigenphases of v^dagger u. The optimum phi is the
        // center of the smallest arc covering all eigenphases.
        std::vector<double> phases = unitary_eigenphases(w);
        const size_t n = phases.size();
        double max_gap = 2 * kPi + phases.front() - phases.back();
        for (size_t i = 0; i + 1 < n; ++i)
            max_gap = std::max(max_gap, phases[i + 1] - phases[i]);
        const double half_width = (2 * kPi - max_gap) / 2.0;
        return 2.0 * std::sin(std::clamp(half_width, 0.0, kPi) / 2.0);
    }
    // Non-unitary inputs: coarse scan plus golden-section refinement.
    auto f = [&](double phi) { return spectral_norm(u - std::polar(1.0, phi) * v); };
    double best_phi = 0, best = f(0);
    const int grid = 256;
    for (int i = 1; i < grid; ++i) {
        const double phi = 2 * kPi * i / grid;
        const double val = f(phi);
        if (val < best) {
            best = val;
            best_phi = phi;
        }
    }
    double a = best_phi - 2 * kPi / grid, b = best_phi + 2 * kPi / grid;
    const double gr = (std::sqrt(5.0) - 1) / 2;
    double c1 = b - gr * (b - a), c2 = a + gr * (b - a);
    double f1 = f(c1), f2 = f(c2);
    for (int it = 0; it < 80; ++it) {
        if (f1 < f2) {
            b = c2;
            c2 = c1;
            f2 = f1;
            c1 = b - gr * (b - a);
            f1 = f(c1);
        } else {
            a = c1;
            c1 = c2;
            f1 = f2;
            c2 = a + gr * (b - a);
            f2 = f(c2);
        }
    }
    return std::min({best, f1, f2});
}

CircuitMetrics metrics(const Circuit& c) {
    CircuitMetrics mtr;
    mtr.gate_count = static_cast<int>(c.gates.size());
    std::vector<int> qubit_depth(static_cast<size_t>(std::max(c.num_qubits, 0)), 0);
    for (const Gate& g : c.gates) {
        if (g.arity() == 2) ++mtr.two_qubit_count;
        int layer = 0;
        for (int q : g.qubits) layer = std::max(layer, qubit_depth[static_cast<size_t>(q)]);
        ++layer;
        for (int q : g.qubits) qubit_depth[static_cast<size_t>(q)] = layer;
        mtr.depth = std::max(mtr.depth, layer);
    }
    return mtr;
}

GateBasis::GateBasis(std::vector<BasisGate> gs, double tol) : gates(std::move(gs)) {
    if (gates.empty()) throw Error(Errc::invalid_gate, "empty gate basis");
    for (const auto& g : gates) {
        if (g.matrix.rows() != 2 || g.matrix.cols() != 2)
            throw Error(Errc::invalid_gate, "basis gates must be single-qubit");
        if (!is_unitary(g.matrix))
            throw Error(Errc::not_unitary, "basis gate " + g.name + " is not unitary");
    }
    inverse_.assign(gates.size(), -1);
    for (size_t i = 0; i < gates.size(); ++i) {
        const Mat adj = gates[i].matrix.adjoint();
        for (size_t j = 0; j < gates.size(); ++j) {
            if ((gates[j].matrix - adj).cwiseAbs().maxCoeff() <= tol) {
                inverse_[i] = static_cast<int>(j);
                break;
            }
        }
        if (inverse_[i] < 0)
            throw Error(Errc::basis_not_inverse_closed,
                        "no inverse for basis gate " + gates[i].name);
    }
}

GateBasis GateBasis::from_names(const std::vector<std::string>& names) {
    std::vector<BasisGate> gs;
    for (const auto& n : names) {
        auto kind = gate_kind_from_name(n);
        if (!kind || gate_arity(*kind) != 1 || gate_param_count(*kind) != 0 ||
            *kind == GateKind::measure)
            throw Error(Errc::unknown_gate, "not a fixed single-qubit gate: " + n);
        gs.push_back({n, Gate(*kind, {0}).local_matrix()});
    }
    return GateBasis(std::move(gs));
}

int GateBasis::index_of(std::string_view name) const {
    for (size_t i = 0; i < gates.size(); ++i)
        if (gates[i].name == name) return static_cast<int>(i);
    return -1;
}

std::uint64_t GateBasis::content_hash() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](std::uint64_t v) {
        h ^= v;
        h *= 0x100000001b3ULL;
    };
    for (const auto& g : gates) {
        mix(fnv1a64(g.name));
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c) {
                // round to 1e-12 grid so rebuilding from text reproduces the hash
                const auto re = static_cast<std::int64_t>(std::llround(g.matrix(r, c).real() * 1e12));
                const auto im = static_cast<std::int64_t>(std::llround(g.matrix(r, c).imag() * 1e12));
                mix(static_cast<std::uint64_t>(re));
                mix(static_cast<std::uint64_t>(im));
            }
    }
    return h;
}

}  // namespace qct
