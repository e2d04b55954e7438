#include "qct/ising.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

#include "qct/error.hpp"

namespace qct {

void validate_variable_name(const std::string& name) {
    if (name.empty()) throw Error(Errc::invalid_variable_name, "empty variable name");
    for (char c : name) {
        if (c == ',' || std::isspace(static_cast<unsigned char>(c)))
            throw Error(Errc::invalid_variable_name,
                        "'" + name + "' contains a reserved character (',' or space)");
    }
}

void validate_input_variable_name(const std::string& name) {
    validate_variable_name(name);
    // '*' names quadratization products, '@' names repetition-code copies
    if (name.find('*') != std::string::npos || name.find('@') != std::string::npos)
        throw Error(Errc::invalid_variable_name,
                    "'" + name + "': '*' and '@' are reserved for generated variables");
}

void validate_hubo_variable_name(const std::string& name) { validate_input_variable_name(name); }

void QuadraticModel::add_variable(const std::string& v) {
    validate_variable_name(v);
    linear.emplace(v, 0.0);
}

void QuadraticModel::add_linear(const std::string& v, double bias) {
    validate_variable_name(v);
    linear[v] += bias;
}

void QuadraticModel::add_quadratic(const std::string& u, const std::string& v, double weight) {
    if (u == v)
        throw Error(Errc::invalid_input, "self-coupling (" + u + "," + v + ") is not allowed");
    add_variable(u);
    add_variable(v);
    VarPair key = u < v ? VarPair{u, v} : VarPair{v, u};
    quadratic[key] += weight;
}

std::vector<std::string> QuadraticModel::variables() const {
    std::vector<std::string> vs;
    vs.reserve(linear.size());
    for (const auto& [v, bias] : linear) vs.push_back(v);
    return vs;
}

void HuboModel::add_term(std::vector<std::string> vars, double coeff) {
    if (vars.empty()) throw Error(Errc::invalid_input, "empty term in higher-order model");
    for (const auto& v : vars) validate_hubo_variable_name(v);
    std::sort(vars.begin(), vars.end());
    if (std::adjacent_find(vars.begin(), vars.end()) != vars.end())
        throw Error(Errc::invalid_input, "repeated variable inside a term");
    terms[vars] += coeff;
}

int HuboModel::max_degree() const {
    int d = 0;
    for (const auto& [vars, c] : terms) d = std::max(d, static_cast<int>(vars.size()));
    return d;
}

std::vector<std::string> HuboModel::variables() const {
    std::set<std::string> vs;
    for (const auto& [vars, c] : terms) vs.insert(vars.begin(), vars.end());
    return {vs.begin(), vs.end()};
}

double HuboModel::total_abs_coefficient() const {
    double s = 0;
    for (const auto& [vars, c] : terms) s += std::abs(c);
    return s;
}

namespace {

int checked_value(const QuadraticModel& model, const Assignment& a, const std::string& v) {
    auto it = a.find(v);
    if (it == a.end()) throw Error(Errc::missing_variable, "assignment misses '" + v + "'");
    const int val = it->second;
    if (model.vartype == Vartype::spin ? (val != -1 && val != 1) : (val != 0 && val != 1))
        throw Error(Errc::domain_violation,
                    "value " + std::to_string(val) + " for '" + v + "' outside the domain");
    return val;
}

}  // namespace

double energy(const QuadraticModel& model, const Assignment& a) {
    double e = model.offset;
    for (const auto& [v, h] : model.linear) e += h * checked_value(model, a, v);
    for (const auto& [pair, j] : model.quadratic)
        e += j * a.at(pair.first) * a.at(pair.second);
    return e;
}

double energy(const HuboModel& model, const Assignment& a) {
    double e = model.offset;
    for (const auto& [vars, c] : model.terms) {
        int prod = 1;
        for (const auto& v : vars) {
            auto it = a.find(v);
            if (it == a.end()) throw Error(Errc::missing_variable, "assignment misses '" + v + "'");
            if (it->second != 0 && it->second != 1)
                throw Error(Errc::domain_violation, "'" + v + "' must be 0 or 1");
            prod *= it->second;
            if (prod == 0) break;
        }
        e += c * prod;
    }
    return e;
}

IsingModel qubo_to_ising(const QuboModel& q) {
    if (q.vartype != Vartype::binary)
        throw Error(Errc::domain_violation, "qubo_to_ising expects a binary model");
    IsingModel m(Vartype::spin);
    m.offset = q.offset;
    for (const auto& [v, h] : q.linear) {
        m.add_variable(v);
        // h x = h (s+1)/2
        m.add_linear(v, h / 2);
        m.offset += h / 2;
    }
    for (const auto& [pair, j] : q.quadratic) {
        // J x_u x_v = J (s_u+1)(s_v+1)/4
        m.add_quadratic(pair.first, pair.second, j / 4);
        m.add_linear(pair.first, j / 4);
        m.add_linear(pair.second, j / 4);
        m.offset += j / 4;
    }
    return m;
}

QuboModel ising_to_qubo(const IsingModel& in) {
    if (in.vartype != Vartype::spin)
        throw Error(Errc::domain_violation, "ising_to_qubo expects a spin model");
    QuboModel q(Vartype::binary);
    q.offset = in.offset;
    for (const auto& [v, h] : in.linear) {
        q.add_variable(v);
        // h s = h (2x - 1)
        q.add_linear(v, 2 * h);
        q.offset -= h;
    }
    for (const auto& [pair, j] : in.quadratic) {
        // J s_u s_v = J (2x_u-1)(2x_v-1)
        q.add_quadratic(pair.first, pair.second, 4 * j);
        q.add_linear(pair.first, -2 * j);
        q.add_linear(pair.second, -2 * j);
        q.offset += j;
    }
    return q;
}

QuadraticModel rescale(const QuadraticModel& model, double alpha) {
    if (!(alpha > 0)) throw Error(Errc::non_positive_alpha, "alpha must be > 0");
    QuadraticModel out = model;
    for (auto& [v, h] : out.linear) h *= alpha;
    for (auto& [p, j] : out.quadratic) j *= alpha;
    out.offset *= alpha;
    return out;
}

double reduction_penalty(int x, int y, int z) { return 3.0 * z + x * y - 2.0 * x * z - 2.0 * y * z; }

double default_reduction_weight(const HuboModel& h) {
    return 1.0 + 2.0 * h.total_abs_coefficient();
}

HuboReduction reduce_hubo(const HuboModel& h, double M, ReductionStrategy strategy) {
    if (!(M > 0)) throw Error(Errc::non_positive_m, "penalty weight M must be > 0");
    (void)strategy;  // single strategy

    HuboReduction out;
    out.penalty_weight = M;

    std::map<std::vector<std::string>, double> terms = h.terms;
    std::map<VarPair, std::string> aux_of_pair;

    auto higher_order = [&terms]() {
        std::vector<const std::vector<std::string>*> hi;
        for (const auto& [vars, c] : terms)
            if (vars.size() >= 3) hi.push_back(&vars);
        return hi;
    };

    while (true) {
        auto hi = higher_order();
        if (hi.empty()) break;

        // Most frequent pair across all remaining higher-order terms,
        // lexicographic tie-break.
        std::map<VarPair, int> freq;
        for (const auto* vars : hi)
            for (size_t i = 0; i < vars->size(); ++i)
                for (size_t j = i + 1; j < vars->size(); ++j)
                    ++freq[{(*vars)[i], (*vars)[j]}];
        VarPair best;
        int best_count = 0;
        for (const auto& [pair, count] : freq) {
            if (count > best_count) {
                best = pair;
                best_count = count;
            }
        }

        std::string aux = best.first + "*" + best.second;
        aux_of_pair[best] = aux;
        out.substitutions.push_back({aux, best.first, best.second});

        std::map<std::vector<std::string>, double> next;
        for (const auto& [vars, c] : terms) {
            if (vars.size() >= 3 &&
                std::binary_search(vars.begin(), vars.end(), best.first) &&
                std::binary_search(vars.begin(), vars.end(), best.second)) {
                std::vector<std::string> replaced;
                replaced.reserve(vars.size() - 1);
                for (const auto& v : vars)
                    if (v != best.first && v != best.second) replaced.push_back(v);
                replaced.push_back(aux);
                std::sort(replaced.begin(), replaced.end());
                next[replaced] += c;
            } else {
                next[vars] += c;
            }
        }
        terms = std::move(next);
    }

    QuboModel& q = out.qubo;
    q.vartype = Vartype::binary;
    q.offset = h.offset;
    for (const auto& v : h.variables()) q.add_variable(v);
    for (const auto& [vars, c] : terms) {
        if (vars.size() == 1)
            q.add_linear(vars[0], c);
        else if (vars.size() == 2)
            q.add_quadratic(vars[0], vars[1], c);
        else
            throw Error(Errc::invalid_input, "reduction left a higher-order term");
    }
    // M * C(x, y, aux) = M * (3 aux + x y - 2 x aux - 2 y aux)
    for (const auto& sub : out.substitutions) {
        q.add_linear(sub.aux, 3 * M);
        q.add_quadratic(sub.x, sub.y, M);
        q.add_quadratic(sub.x, sub.aux, -2 * M);
        q.add_quadratic(sub.y, sub.aux, -2 * M);
    }
    return out;
}

namespace {

struct Compiled {
    std::vector<std::string> vars;
    std::vector<double> h;
    std::vector<std::tuple<int, int, double>> pairs;
    double offset = 0;
    Vartype vartype = Vartype::spin;

    explicit Compiled(const QuadraticModel& model) {
        vars = model.variables();
        vartype = model.vartype;
        offset = model.offset;
        std::map<std::string, int> index;
        for (size_t i = 0; i < vars.size(); ++i) index[vars[i]] = static_cast<int>(i);
        h.resize(vars.size());
        for (const auto& [v, bias] : model.linear) h[static_cast<size_t>(index[v])] = bias;
        for (const auto& [p, j] : model.quadratic)
            pairs.emplace_back(index[p.first], index[p.second], j);
    }

    int value_of_bit(int bit) const {
        return vartype == Vartype::spin ? (bit ? 1 : -1) : bit;
    }

    double energy_of(std::uint64_t mask) const {
        double e = offset;
        for (size_t i = 0; i < h.size(); ++i)
            e += h[i] * value_of_bit((mask >> i) & 1);
        for (const auto& [i, j, w] : pairs)
            e += w * value_of_bit((mask >> i) & 1) * value_of_bit((mask >> j) & 1);
        return e;
    }

    Assignment assignment_of(std::uint64_t mask) const {
        Assignment a;
        for (size_t i = 0; i < vars.size(); ++i)
            a[vars[i]] = value_of_bit((mask >> i) & 1);
        return a;
    }
};

}  // namespace

namespace {

GroundSet brute_force_over_masks(int n, const std::function<double(std::uint64_t)>& energy_of,
                                 const std::function<Assignment(std::uint64_t)>& assignment_of) {
    GroundSet gs;
    if (n == 0) {
        gs.energy = energy_of(0);
        gs.assignments.push_back({});
        return gs;
    }
    const std::uint64_t count = 1ULL << n;
    gs.energy = energy_of(0);
    for (std::uint64_t mask = 1; mask < count; ++mask)
        gs.energy = std::min(gs.energy, energy_of(mask));
    for (std::uint64_t mask = 0; mask < count; ++mask)
        if (energy_of(mask) <= gs.energy + 1e-9) gs.assignments.push_back(assignment_of(mask));
    return gs;
}

}  // namespace

GroundSet brute_force_solve(const QuadraticModel& model) {
    const int n = model.num_variables();
    if (n > 24) throw Error(Errc::too_many_variables, "brute force supports at most 24 variables");
    Compiled cm(model);
    return brute_force_over_masks(
        n, [&](std::uint64_t m) { return cm.energy_of(m); },
        [&](std::uint64_t m) { return cm.assignment_of(m); });
}

GroundSet brute_force_solve(const HuboModel& model) {
    const auto vars = model.variables();
    const int n = static_cast<int>(vars.size());
    if (n > 24) throw Error(Errc::too_many_variables, "brute force supports at most 24 variables");
    auto assignment_of = [&](std::uint64_t mask) {
        Assignment a;
        for (int i = 0; i < n; ++i) a[vars[static_cast<size_t>(i)]] = (mask >> i) & 1;
        return a;
    };
    return brute_force_over_masks(
        n, [&](std::uint64_t m) { return n == 0 ? model.offset : energy(model, assignment_of(m)); },
        assignment_of);
}

Assignment Distribution::assignment_of(std::size_t index) const {
    Assignment a;
    for (size_t i = 0; i < vars.size(); ++i) {
        const int bit = (index >> i) & 1;
        a[vars[i]] = vartype == Vartype::spin ? (bit ? 1 : -1) : bit;
    }
    return a;
}

std::size_t Distribution::index_of(const Assignment& a) const {
    std::size_t idx = 0;
    for (size_t i = 0; i < vars.size(); ++i) {
        auto it = a.find(vars[i]);
        if (it == a.end()) throw Error(Errc::missing_variable, "assignment misses '" + vars[i] + "'");
        if (it->second == 1) idx |= (std::size_t(1) << i);
    }
    return idx;
}

Distribution boltzmann_distribution(const QuadraticModel& model, double T) {
    if (!(T > 0)) throw Error(Errc::non_positive_t, "temperature must be > 0");
    const int n = model.num_variables();
    if (n > 20)
        throw Error(Errc::too_many_variables, "exact distribution supports at most 20 variables");
    Compiled cm(model);
    Distribution d;
    d.vars = cm.vars;
    d.vartype = model.vartype;
    const std::size_t count = std::size_t(1) << n;
    std::vector<double> neg_e(count);
    double max_exp = -1e300;
    for (std::size_t mask = 0; mask < count; ++mask) {
        neg_e[mask] = -cm.energy_of(mask) / T;
        max_exp = std::max(max_exp, neg_e[mask]);
    }
    d.probs.resize(count);
    double z = 0;
    for (std::size_t mask = 0; mask < count; ++mask) {
        d.probs[mask] = std::exp(neg_e[mask] - max_exp);
        z += d.probs[mask];
    }
    for (auto& p : d.probs) p /= z;
    return d;
}

SampleSet SampleSet::make(const QuadraticModel& model,
                          const std::vector<std::pair<Assignment, long>>& draws) {
    SampleSet s;
    s.records.reserve(draws.size());
    for (const auto& [a, occ] : draws) {
        if (occ < 1) throw Error(Errc::invalid_input, "occurrences must be >= 1");
        Sample r;
        r.assignment = a;
        r.energy = energy(model, a);
        r.occurrences = occ;
        s.records.push_back(std::move(r));
    }
    return s;
}

SampleSet SampleSet::aggregated() const {
    std::map<Assignment, Sample> merged;
    for (const Sample& r : records) {
        auto [it, fresh] = merged.emplace(r.assignment, r);
        if (!fresh) {
            Sample& m = it->second;
            const double w = static_cast<double>(m.occurrences) + static_cast<double>(r.occurrences);
            m.chain_break_fraction =
                (m.chain_break_fraction * static_cast<double>(m.occurrences) +
                 r.chain_break_fraction * static_cast<double>(r.occurrences)) /
                w;
            m.occurrences += r.occurrences;
        }
    }
    SampleSet out;
    out.records.reserve(merged.size());
    for (auto& [a, r] : merged) out.records.push_back(std::move(r));
    std::stable_sort(out.records.begin(), out.records.end(),
                     [](const Sample& a, const Sample& b) {
                         if (a.energy != b.energy) return a.energy < b.energy;
                         return a.assignment < b.assignment;
                     });
    return out;
}

long SampleSet::total_occurrences() const {
    long t = 0;
    for (const auto& r : records) t += r.occurrences;
    return t;
}

const Sample* SampleSet::best() const {
    const Sample* b = nullptr;
    for (const auto& r : records)
        if (!b || r.energy < b->energy) b = &r;
    return b;
}

}  // namespace qct
