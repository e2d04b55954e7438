#include "qct/sk.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <unordered_map>

#include "qct/error.hpp"
#include "qct/rng.hpp"

namespace qct {

namespace {

constexpr double kDupTol = 1e-8;
constexpr std::uint32_t kNetVersion = 1;
constexpr char kNetMagic[8] = {'Q', 'C', 'T', 'S', 'K', 'N', 'E', 'T'};

double quat_euclid2(const std::array<double, 4>& a, const std::array<double, 4>& b) {
    double s = 0;
    for (int k = 0; k < 4; ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
    return s;
}

// distance between SU(2) elements from the quaternion inner product:
// d = 2 sin(phi/2) with cos(phi) = |<qa, qb>|
double quat_distance(const std::array<double, 4>& a, const std::array<double, 4>& b) {
    double dot = 0;
    for (int k = 0; k < 4; ++k) dot += a[k] * b[k];
    const double c = std::min(1.0, std::abs(dot));
    return 2.0 * std::sin(std::acos(c) / 2.0);
}

struct DupGrid {
    std::unordered_map<std::uint64_t, std::vector<int>> cells;
    const std::vector<SKNet::Entry>* entries = nullptr;

    static std::uint64_t cell_hash(long long a, long long b, long long c, long long d) {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (long long v : {a, b, c, d}) {
            h ^= static_cast<std::uint64_t>(v);
            h *= 0x100000001b3ULL;
        }
        return h;
    }

    static std::array<long long, 4> cell_of(const std::array<double, 4>& q) {
        std::array<long long, 4> c;
        for (int k = 0; k < 4; ++k) c[static_cast<size_t>(k)] = static_cast<long long>(std::floor(q[static_cast<size_t>(k)] / (4 * kDupTol)));
        return c;
    }

    bool contains(const std::array<double, 4>& q) const {
        const auto base = cell_of(q);
        for (int da = -1; da <= 1; ++da)
            for (int db = -1; db <= 1; ++db)
                for (int dc = -1; dc <= 1; ++dc)
                    for (int dd = -1; dd <= 1; ++dd) {
                        auto it = cells.find(cell_hash(base[0] + da, base[1] + db, base[2] + dc,
                                                       base[3] + dd));
                        if (it == cells.end()) continue;
                        for (int idx : it->second) {
                            const auto& e = (*entries)[static_cast<size_t>(idx)].quat;
                            if (std::min(quat_euclid2(e, q),
                                         quat_euclid2(e, {-q[0], -q[1], -q[2], -q[3]})) <
                                kDupTol * kDupTol)
                                return true;
                        }
                    }
        return false;
    }

    void insert(int idx, const std::array<double, 4>& q) {
        const auto c = cell_of(q);
        cells[cell_hash(c[0], c[1], c[2], c[3])].push_back(idx);
    }
};

}  // namespace

SKNet::SKNet(GateBasis basis, int l0, std::vector<Entry> entries, double eps0)
    : basis_(std::move(basis)), l0_(l0), entries_(std::move(entries)), eps0_(eps0) {
    build_index();
}

void SKNet::build_index() {
    if (entries_.size() < 5000) return;  // linear scan is fine below this
    nodes_.clear();
    nodes_.reserve(entries_.size());
    std::vector<int> idx(entries_.size());
    for (size_t i = 0; i < entries_.size(); ++i) idx[i] = static_cast<int>(i);

    auto build = [&](auto&& self, int lo, int hi, int depth) -> int {
        if (lo >= hi) return -1;
        const int axis = depth % 4;
        const int mid = (lo + hi) / 2;
        std::nth_element(idx.begin() + lo, idx.begin() + mid, idx.begin() + hi,
                         [&](int a, int b) {
                             return entries_[static_cast<size_t>(a)].quat[static_cast<size_t>(axis)] <
                                    entries_[static_cast<size_t>(b)].quat[static_cast<size_t>(axis)];
                         });
        const int node_id = static_cast<int>(nodes_.size());
        nodes_.push_back({idx[static_cast<size_t>(mid)], axis, -1, -1});
        const int left = self(self, lo, mid, depth + 1);
        const int right = self(self, mid + 1, hi, depth + 1);
        nodes_[static_cast<size_t>(node_id)].left = left;
        nodes_[static_cast<size_t>(node_id)].right = right;
        return node_id;
    };
    root_ = build(build, 0, static_cast<int>(idx.size()), 0);
}

int SKNet::nearest(const Mat& u) const {
    if (entries_.empty()) throw Error(Errc::empty_net, "the lookup table is empty");
    const auto q = su2_quaternion(u);

    if (root_ < 0) {
        int best = 0;
        double best_d = quat_distance(entries_[0].quat, q);
        for (size_t i = 1; i < entries_.size(); ++i) {
            const double d = quat_distance(entries_[i].quat, q);
            if (d < best_d) {
                best_d = d;
                best = static_cast<int>(i);
            }
        }
        return best;
    }

    int best = -1;
    double best_d2 = 1e300;
    // max |dot| over both quaternion signs == min euclidean distance to q or -q
    for (const std::array<double, 4>& target :
         {q, std::array<double, 4>{-q[0], -q[1], -q[2], -q[3]}}) {
        auto descend = [&](auto&& self, int node) -> void {
            if (node < 0) return;
            const KdNode& nd = nodes_[static_cast<size_t>(node)];
            const auto& eq = entries_[static_cast<size_t>(nd.entry)].quat;
            const double d2 = quat_euclid2(eq, target);
            if (d2 < best_d2) {
                best_d2 = d2;
                best = nd.entry;
            }
            const double delta = target[static_cast<size_t>(nd.axis)] - eq[static_cast<size_t>(nd.axis)];
            const int near = delta < 0 ? nd.left : nd.right;
            const int far = delta < 0 ? nd.right : nd.left;
            self(self, near);
            if (delta * delta < best_d2) self(self, far);
        };
        descend(descend, root_);
    }
    return best;
}

SKNet sk_precompile(const GateBasis& basis, int l0, int probes) {
    if (l0 < 0 || l0 > 16) throw Error(Errc::invalid_input, "l0 must be between 0 and 16");

    std::vector<SKNet::Entry> entries;
    DupGrid grid;
    grid.entries = &entries;

    SKNet::Entry identity;
    identity.seq = {};
    identity.u = Mat::Identity(2, 2);
    identity.quat = su2_quaternion(identity.u);
    entries.push_back(identity);
    grid.insert(0, identity.quat);

    std::vector<int> frontier{0};
    for (int len = 1; len <= l0; ++len) {
        std::vector<int> next;
        for (int idx : frontier) {
            for (int g = 0; g < basis.size(); ++g) {
                SKNet::Entry cand;
                cand.u = basis.gates[static_cast<size_t>(g)].matrix * entries[static_cast<size_t>(idx)].u;
                cand.quat = su2_quaternion(cand.u);
                if (grid.contains(cand.quat)) continue;
                cand.seq = entries[static_cast<size_t>(idx)].seq;
                cand.seq.push_back(g);
                const int new_idx = static_cast<int>(entries.size());
                grid.insert(new_idx, cand.quat);
                entries.push_back(std::move(cand));
                next.push_back(new_idx);
            }
        }
        frontier = std::move(next);
        if (frontier.empty()) break;
    }

    SKNet net(basis, l0, std::move(entries), 0.0);

    // covering radius by Monte Carlo probing (fixed internal seed)
    Rng rng(0x5eedULL);
    double eps0 = 0;
    for (int p = 0; p < probes; ++p) {
        const Mat target = random_special_unitary(2, rng);
        const int idx = net.nearest(target);
        eps0 = std::max(eps0, distance(net.entries()[static_cast<size_t>(idx)].u, target));
    }
    return SKNet(net.basis(), l0, net.entries(), eps0);
}

SkApprox sk_basic_approx(const SKNet& net, const Mat& u) {
    const int idx = net.nearest(u);
    const auto& e = net.entries()[static_cast<size_t>(idx)];
    return {e.seq, e.u, distance(e.u, u)};
}

std::pair<Mat, Mat> group_commutator_factor(const Mat& delta) {
    if (delta.rows() != 2 || delta.cols() != 2 || !is_unitary(delta, 1e-8))
        throw Error(Errc::not_unitary, "expected a 2x2 unitary");
    if (distance(delta, Mat::Identity(2, 2)) >= 0.5)
        throw Error(Errc::delta_too_far, "commutator factorization needs distance(delta, I) < 0.5");

    const auto [theta, axis] = su2_axis_angle(delta);
    if (theta < 1e-14) return {Mat::Identity(2, 2), Mat::Identity(2, 2)};

    // angle phi with sin(theta/2) = 2 sin^2(phi/2) sqrt(1 - sin^4(phi/2)):
    // closed form phi = 2 asin(sqrt(sin(theta/4)))
    const double phi = 2.0 * std::asin(std::sqrt(std::sin(theta / 4.0)));
    const Mat v = rot_x(phi);
    const Mat w = rot_y(phi);
    const Mat comm = v * w * v.adjoint() * w.adjoint();

    const auto [ctheta, caxis] = su2_axis_angle(comm);
    (void)ctheta;  // equals theta by the choice of phi

    // rotate the commutator axis onto the target axis
    const double dot = caxis[0] * axis[0] + caxis[1] * axis[1] + caxis[2] * axis[2];
    std::array<double, 3> cross{caxis[1] * axis[2] - caxis[2] * axis[1],
                                caxis[2] * axis[0] - caxis[0] * axis[2],
                                caxis[0] * axis[1] - caxis[1] * axis[0]};
    const double cross_norm = std::sqrt(cross[0] * cross[0] + cross[1] * cross[1] + cross[2] * cross[2]);
    Mat s = Mat::Identity(2, 2);
    if (cross_norm > 1e-12) {
        s = su2_from_axis_angle(std::atan2(cross_norm, dot), cross);
    } else if (dot < 0) {
        // antiparallel: rotate by pi about any axis orthogonal to caxis
        std::array<double, 3> ortho{-caxis[1], caxis[0], 0.0};
        if (std::abs(caxis[0]) + std::abs(caxis[1]) < 1e-9) ortho = {1.0, 0.0, 0.0};
        s = su2_from_axis_angle(kPi, ortho);
    }
    return {s * v * s.adjoint(), s * w * s.adjoint()};
}

namespace {

std::vector<int> inverse_sequence(const GateBasis& basis, const std::vector<int>& seq) {
    std::vector<int> inv;
    inv.reserve(seq.size());
    for (auto it = seq.rbegin(); it != seq.rend(); ++it) inv.push_back(basis.inverse_index(*it));
    return inv;
}

void append_simplified(const GateBasis& basis, std::vector<int>& out, const std::vector<int>& add) {
    for (int g : add) {
        if (!out.empty() && basis.inverse_index(out.back()) == g)
            out.pop_back();
        else
            out.push_back(g);
    }
}

SkApprox sk_recurse(const Mat& target, const SKNet& net, int depth) {
    if (depth == 0) return sk_basic_approx(net, target);

    SkApprox prev = sk_recurse(target, net, depth - 1);
    const Mat delta = su2_project(target * prev.u.adjoint());
    if (distance(delta, Mat::Identity(2, 2)) >= 0.45) return prev;

    const auto [v, w] = group_commutator_factor(delta);
    const SkApprox va = sk_recurse(v, net, depth - 1);
    const SkApprox wa = sk_recurse(w, net, depth - 1);

    std::vector<int> seq;
    seq.reserve(prev.seq.size() + 2 * (va.seq.size() + wa.seq.size()));
    append_simplified(net.basis(), seq, prev.seq);
    append_simplified(net.basis(), seq, inverse_sequence(net.basis(), wa.seq));
    append_simplified(net.basis(), seq, inverse_sequence(net.basis(), va.seq));
    append_simplified(net.basis(), seq, wa.seq);
    append_simplified(net.basis(), seq, va.seq);

    SkApprox out;
    // compose the actual simplified sequence so the reported unitary and
    // distance describe exactly what will be emitted
    out.u = Mat::Identity(2, 2);
    for (int g : seq) out.u = net.basis().gates[static_cast<size_t>(g)].matrix * out.u;
    out.seq = std::move(seq);
    out.dist = distance(out.u, target);
    if (out.dist > prev.dist) return prev;  // never regress with depth
    return out;
}

}  // namespace

SkApprox sk_compile(const Mat& u, const SKNet& net, int depth) {
    if (net.eps0() >= 0.5)
        throw Error(Errc::net_too_coarse,
                    "covering radius " + std::to_string(net.eps0()) +
                        " is too large for the recursion; raise l0");
    if (depth < 0) throw Error(Errc::invalid_input, "depth must be >= 0");
    return sk_recurse(su2_project(u), net, depth);
}

std::vector<std::string> sequence_names(const SKNet& net, const std::vector<int>& seq) {
    std::vector<std::string> names;
    names.reserve(seq.size());
    for (int g : seq) names.push_back(net.basis().gates[static_cast<size_t>(g)].name);
    return names;
}

Circuit sequence_circuit(const SKNet& net, const std::vector<int>& seq) {
    Circuit c(1);
    for (int g : seq) {
        const auto& bg = net.basis().gates[static_cast<size_t>(g)];
        if (auto kind = gate_kind_from_name(bg.name); kind && gate_param_count(*kind) == 0 &&
                                                      gate_arity(*kind) == 1 &&
                                                      *kind != GateKind::measure)
            c.append(Gate(*kind, {0}));
        else
            c.append(Gate::custom(bg.matrix, {0}));
    }
    return c;
}

// --- binary cache -----------------------------------------------------------

namespace {

template <typename T>
void put(std::ofstream& os, const T& v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::ifstream& is) {
    T v;
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is) throw Error(Errc::invalid_input, "truncated net cache file");
    return v;
}

void put_mat2(std::ofstream& os, const Mat& m) {
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) {
            put(os, m(r, c).real());
            put(os, m(r, c).imag());
        }
}

Mat get_mat2(std::ifstream& is) {
    Mat m(2, 2);
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) {
            const double re = get<double>(is);
            const double im = get<double>(is);
            m(r, c) = cxd(re, im);
        }
    return m;
}

}  // namespace

void SKNet::save(const std::string& path) const {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error(Errc::invalid_input, "cannot write " + path);
    os.write(kNetMagic, sizeof(kNetMagic));
    put(os, kNetVersion);
    put(os, basis_.content_hash());
    put(os, static_cast<std::uint32_t>(l0_));
    put(os, eps0_);
    put(os, static_cast<std::uint32_t>(basis_.gates.size()));
    for (const auto& g : basis_.gates) {
        put(os, static_cast<std::uint32_t>(g.name.size()));
        os.write(g.name.data(), static_cast<std::streamsize>(g.name.size()));
        put_mat2(os, g.matrix);
    }
    put(os, static_cast<std::uint64_t>(entries_.size()));
    for (const auto& e : entries_) {
        put(os, static_cast<std::uint16_t>(e.seq.size()));
        for (int g : e.seq) put(os, static_cast<std::uint8_t>(g));
        put_mat2(os, e.u);
    }
}

SKNet SKNet::load(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error(Errc::invalid_input, "cannot read " + path);
    char magic[8];
    is.read(magic, 8);
    if (!is || std::memcmp(magic, kNetMagic, 8) != 0)
        throw Error(Errc::invalid_input, "not a net cache file: " + path);
    if (get<std::uint32_t>(is) != kNetVersion)
        throw Error(Errc::invalid_input, "unsupported net cache version");
    const std::uint64_t basis_hash = get<std::uint64_t>(is);
    const int l0 = static_cast<int>(get<std::uint32_t>(is));
    const double eps0 = get<double>(is);

    std::vector<BasisGate> gs;
    const auto nbasis = get<std::uint32_t>(is);
    for (std::uint32_t i = 0; i < nbasis; ++i) {
        const auto len = get<std::uint32_t>(is);
        std::string name(len, '\0');
        is.read(name.data(), len);
        gs.push_back({std::move(name), get_mat2(is)});
    }
    GateBasis basis(std::move(gs));
    if (basis.content_hash() != basis_hash)
        throw Error(Errc::invalid_input, "net cache basis hash mismatch");

    std::vector<Entry> entries;
    const auto n = get<std::uint64_t>(is);
    entries.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) {
        Entry e;
        const auto len = get<std::uint16_t>(is);
        e.seq.reserve(len);
        for (std::uint16_t k = 0; k < len; ++k) e.seq.push_back(get<std::uint8_t>(is));
        e.u = get_mat2(is);
        e.quat = su2_quaternion(e.u);
        entries.push_back(std::move(e));
    }
    return SKNet(std::move(basis), l0, std::move(entries), eps0);
}

}  // namespace qct
