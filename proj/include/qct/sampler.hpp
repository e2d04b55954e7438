#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qct/ising.hpp"
#include "qct/linalg.hpp"

namespace qct {

// Piecewise-linear weights for H(s) = F(s) H_P + G(s) H_T over s = t/T in
// [0,1]; H_P is the diagonal problem energy, H_T = -sum_i X_i.
struct AnnealSchedule {
    struct Point {
        double s, f, g;
    };
    std::vector<Point> points;
    double total_time = 1.0;

    AnnealSchedule(std::vector<Point> pts, double total);
    static AnnealSchedule linear(double total_time);  // F: 0 -> 1, G: 1 -> 0

    double f_at(double s) const;
    double g_at(double s) const;

    // soft checks: F(0) should be well below G(0), G(1) close to 0
    std::vector<std::string> warnings() const;

    static AnnealSchedule from_csv(const std::string& text, double total_time);
    std::string to_csv() const;
};

struct BetaSchedule {
    double beta_min = 0.1;
    double beta_max = 10.0;  // geometric ladder; equal values = fixed temperature
};

// Independent single-spin Metropolis runs over a geometric inverse-temperature
// ladder; one record per read, deterministic per (seed, read index).
SampleSet simulated_anneal(const IsingModel& model, int sweeps, BetaSchedule beta, int reads,
                           std::uint64_t seed, int threads = 1);

// One long Metropolis chain at fixed inverse temperature; returns visit counts
// of the states seen after each sweep past the burn-in. Equilibration oracle
// for distribution-level checks.
std::map<Assignment, long> metropolis_histogram(const IsingModel& model, double beta, int sweeps,
                                                double burn_in_fraction, std::uint64_t seed);

struct TransverseFieldHamiltonian {
    IsingModel problem;

    explicit TransverseFieldHamiltonian(IsingModel p);
};

struct EvolutionResult {
    Vec state;                       // final amplitudes, basis bit k = variable k (sorted)
    std::vector<std::string> vars;   // sorted variable order
    SampleSet samples;
    double norm_drift = 0.0;
};

// Exact statevector evolution from |+...+> under H(s) via Strang splitting
// (diagonal phases + single-qubit X rotations, midpoint schedule values).
// Basis state bit = 1 reads as spin +1.
EvolutionResult adiabatic_evolve(const TransverseFieldHamiltonian& h,
                                 const AnnealSchedule& schedule, double dt, std::uint64_t seed,
                                 int reads);

// Probability mass of the exact ground states of `model` in `state`.
double ground_state_population(const IsingModel& model, const EvolutionResult& evolved);

struct IceNoise {
    double mu_h = 0, sigma_h = 0;
    double mu_J = 0, sigma_J = 0;

    IceNoise() = default;
    IceNoise(double mh, double sh, double mj, double sj);
};

// Adds mu + N(0, sigma) to every bias and coupling, deterministic per seed.
IsingModel perturb_ice(const IsingModel& model, const IceNoise& noise, std::uint64_t seed);

// Inverse-slope of the least-squares fit of log-count ratios against energy
// differences over pairs of observed assignments (counts below 10 ignored).
double estimate_teff(const IsingModel& model, const SampleSet& samples);

// `reads` independent draws from the exact Boltzmann distribution.
SampleSet boltzmann_sample(const IsingModel& model, double T, int reads, std::uint64_t seed);

}  // namespace qct
