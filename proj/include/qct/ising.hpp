#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace qct {

enum class Vartype { spin, binary };

using Assignment = std::map<std::string, int>;
using VarPair = std::pair<std::string, std::string>;  // kept ordered first < second

// Quadratic cost over spin (+1/-1) or binary (0/1) variables:
//   E(s) = sum_ij J_ij s_i s_j + sum_i h_i s_i + offset
// The sign convention is "+" on both sums; loaders offer a `negate` switch for
// inputs written with the opposite convention.
struct QuadraticModel {
    Vartype vartype = Vartype::spin;
    std::map<std::string, double> linear;   // contains every variable
    std::map<VarPair, double> quadratic;
    double offset = 0.0;

    QuadraticModel() = default;
    explicit QuadraticModel(Vartype vt) : vartype(vt) {}

    void add_variable(const std::string& v);
    void add_linear(const std::string& v, double bias);
    void add_quadratic(const std::string& u, const std::string& v, double weight);

    int num_variables() const { return static_cast<int>(linear.size()); }
    std::vector<std::string> variables() const;
};

using IsingModel = QuadraticModel;
using QuboModel = QuadraticModel;

// Higher-order binary cost: sum over terms c_T * prod_{v in T} x_v + offset,
// x in {0,1}, term subsets non-empty and unique.
struct HuboModel {
    std::map<std::vector<std::string>, double> terms;  // keys sorted, non-empty
    double offset = 0.0;

    void add_term(std::vector<std::string> vars, double coeff);
    int max_degree() const;
    std::vector<std::string> variables() const;
    double total_abs_coefficient() const;
};

struct Sample {
    Assignment assignment;
    double energy = 0.0;
    long occurrences = 1;
    double chain_break_fraction = 0.0;
};

struct SampleSet {
    std::vector<Sample> records;

    // Builds records with energies evaluated against `model` (the stored
    // energy always matches energy(model, assignment)).
    static SampleSet make(const QuadraticModel& model,
                          const std::vector<std::pair<Assignment, long>>& draws);

    // Merge identical assignments (occurrences summed, chain-break fraction
    // occurrence-weighted) and order by (energy, assignment).
    SampleSet aggregated() const;

    long total_occurrences() const;
    const Sample* best() const;  // lowest energy, nullptr when empty
};

double energy(const QuadraticModel& model, const Assignment& a);
double energy(const HuboModel& model, const Assignment& a);

IsingModel qubo_to_ising(const QuboModel& q);
QuboModel ising_to_qubo(const IsingModel& m);

QuadraticModel rescale(const QuadraticModel& model, double alpha);

// Consistency penalty driving z towards x*y (binary variables):
//   C(x,y,z) = 3z + xy - 2xz - 2yz
double reduction_penalty(int x, int y, int z);

enum class ReductionStrategy { most_frequent_pair };

struct Substitution {
    std::string aux;  // new variable
    std::string x, y; // aux == x*y on consistent assignments
};

struct HuboReduction {
    QuboModel qubo;
    std::vector<Substitution> substitutions;
    double penalty_weight = 0.0;
};

// Quadratize by repeatedly substituting the most frequent variable pair among
// terms of order >= 3 (ties: lexicographic). Each substitution adds
// M * C(x, y, aux) to the cost.
HuboReduction reduce_hubo(const HuboModel& h, double M,
                          ReductionStrategy strategy = ReductionStrategy::most_frequent_pair);

// 1 + 2 * sum |coefficients|: any single violated substitution then costs more
// than the whole legal energy range.
double default_reduction_weight(const HuboModel& h);

struct GroundSet {
    double energy = 0.0;
    std::vector<Assignment> assignments;
};

GroundSet brute_force_solve(const QuadraticModel& model);  // <= 24 variables
GroundSet brute_force_solve(const HuboModel& model);

// Exact Boltzmann distribution P(S) = exp(-E(S)/T)/Z over all assignments.
// Index i encodes the assignment: bit k set <=> variable k (sorted order) is
// +1 (spin) or 1 (binary).
struct Distribution {
    std::vector<std::string> vars;
    Vartype vartype = Vartype::spin;
    std::vector<double> probs;

    Assignment assignment_of(std::size_t index) const;
    std::size_t index_of(const Assignment& a) const;
};

Distribution boltzmann_distribution(const QuadraticModel& model, double T);  // <= 20 vars

void validate_variable_name(const std::string& name);
void validate_input_variable_name(const std::string& name);
void validate_hubo_variable_name(const std::string& name);

}  // namespace qct
