#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qct/linalg.hpp"

namespace qct {

// Conventions, used consistently everywhere:
//  - Basis states are indexed with qubit k as bit k (qubit 0 = least
//    significant bit).
//  - A gate's local matrix uses the listed qubit order the same way: the j-th
//    listed qubit is local bit j. For cx the control is listed first.
//  - Gate list order is temporal order; the circuit unitary is the matrix
//    product in reverse list order (the leftmost gate acts first).

enum class GateKind {
    h, x, y, z, s, sdg, t, tdg, rx, ry, rz, u3, cx, cz, swap, measure, custom
};

std::string_view gate_name(GateKind k);
std::optional<GateKind> gate_kind_from_name(std::string_view name);

// Number of qubits a gate kind acts on; -1 for custom (taken from the matrix).
int gate_arity(GateKind k);
int gate_param_count(GateKind k);

struct Gate {
    GateKind kind = GateKind::h;
    std::vector<int> qubits;
    std::vector<double> params;
    std::shared_ptr<const Mat> matrix;  // custom gates only

    Gate() = default;
    Gate(GateKind k, std::vector<int> qs, std::vector<double> ps = {});

    static Gate custom(Mat m, std::vector<int> qs);

    int arity() const { return static_cast<int>(qubits.size()); }
    std::string name() const { return std::string(gate_name(kind)); }

    // Local matrix in the gate's own qubit ordering. Throws for measure.
    Mat local_matrix() const;
};

struct Circuit {
    int num_qubits = 0;
    std::vector<Gate> gates;

    Circuit() = default;
    explicit Circuit(int n);

    void append(Gate g);  // checks qubit indices against num_qubits
    void append(const Circuit& other);
    bool has_measure() const;
};

struct UnitaryMatrix {
    Mat m;

    explicit UnitaryMatrix(Mat mat, double tol = 1e-10);
    static UnitaryMatrix trusted(Mat mat);

    int dim() const { return static_cast<int>(m.rows()); }

  private:
    UnitaryMatrix() = default;
};

// In-place application of a gate to every column of `columns` (each column is
// a statevector over n qubits).
void apply_gate(Mat& columns, const Gate& g, int num_qubits);

UnitaryMatrix compose_unitary(const Circuit& c);

// min over global phase of the spectral norm ||u - e^{i phi} v||.
double distance(const Mat& u, const Mat& v);
inline double distance(const UnitaryMatrix& u, const UnitaryMatrix& v) {
    return distance(u.m, v.m);
}

struct CircuitMetrics {
    int depth = 0;
    int gate_count = 0;
    int two_qubit_count = 0;
};

CircuitMetrics metrics(const Circuit& c);

struct BasisGate {
    std::string name;
    Mat matrix;  // 2x2
};

// Finite inverse-closed set of single-qubit generators.
struct GateBasis {
    std::vector<BasisGate> gates;

    explicit GateBasis(std::vector<BasisGate> gs, double tol = 1e-10);
    static GateBasis from_names(const std::vector<std::string>& names);

    int size() const { return static_cast<int>(gates.size()); }
    // Index of the basis gate equal to the adjoint of gates[i].
    int inverse_index(int i) const { return inverse_[static_cast<size_t>(i)]; }
    int index_of(std::string_view name) const;
    std::uint64_t content_hash() const;

  private:
    std::vector<int> inverse_;
};

}  // namespace qct
