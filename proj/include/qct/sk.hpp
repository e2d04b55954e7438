#pragma once

#include <array>
#include <string>
#include <vector>

#include "qct/circuit.hpp"

namespace qct {

// Precompiled lookup table over all basis-gate sequences up to length l0,
// pruned to distinct unitaries (shortest sequence kept), with a
// nearest-neighbor index over sign-canonicalized SU(2) quaternions.
class SKNet {
  public:
    struct Entry {
        std::vector<int> seq;  // basis gate indices, temporal order
        Mat u;                 // composed 2x2 unitary
        std::array<double, 4> quat;
    };

    SKNet(GateBasis basis, int l0, std::vector<Entry> entries, double eps0);

    const GateBasis& basis() const { return basis_; }
    int l0() const { return l0_; }
    const std::vector<Entry>& entries() const { return entries_; }

    // covering radius estimated by random probing at build time
    double eps0() const { return eps0_; }

    // index of the entry closest to u (phase-insensitive)
    int nearest(const Mat& u) const;

    void save(const std::string& path) const;
    static SKNet load(const std::string& path);

  private:
    void build_index();

    GateBasis basis_;
    int l0_ = 0;
    std::vector<Entry> entries_;
    double eps0_ = 0;

    // kd-tree over quaternions; linear scan below the size threshold
    struct KdNode {
        int entry = -1;
        int axis = 0;
        int left = -1, right = -1;
    };
    std::vector<KdNode> nodes_;
    int root_ = -1;
};

// Enumerates sequences breadth-first up to length l0 with duplicate pruning
// (1e-8 quaternion tolerance), then estimates the covering radius from
// `probes` random SU(2) targets.
SKNet sk_precompile(const GateBasis& basis, int l0, int probes = 1000);

struct SkApprox {
    std::vector<int> seq;  // basis gate indices, temporal order
    Mat u;
    double dist = 0;
};

// Table lookup: best entry of the net for u.
SkApprox sk_basic_approx(const SKNet& net, const Mat& u);

// Balanced group commutator: v w v^dag w^dag equals delta up to global phase
// (exact to 1e-10). Rotation-angle construction: delta is a rotation by theta,
// v and w are equal-angle rotations about orthogonal axes conjugated to align.
std::pair<Mat, Mat> group_commutator_factor(const Mat& delta);

// Recursive refinement; depth 0 is the table lookup. The achieved distance
// never exceeds the previous depth's (the recursion falls back when a step
// fails to improve). Sequence length <= 5^depth * l0.
SkApprox sk_compile(const Mat& u, const SKNet& net, int depth);

// Gate names for a compiled sequence, and the sequence as a 1-qubit circuit.
std::vector<std::string> sequence_names(const SKNet& net, const std::vector<int>& seq);
Circuit sequence_circuit(const SKNet& net, const std::vector<int>& seq);

}  // namespace qct
