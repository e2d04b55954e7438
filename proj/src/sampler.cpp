#include "qct/sampler.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

#include "qct/error.hpp"
#include "qct/rng.hpp"

namespace qct {

AnnealSchedule::AnnealSchedule(std::vector<Point> pts, double total)
    : points(std::move(pts)), total_time(total) {
    if (points.size() < 2) throw Error(Errc::invalid_schedule, "need at least two points");
    if (!(total_time > 0)) throw Error(Errc::invalid_schedule, "total_time must be > 0");
    if (std::abs(points.front().s) > 1e-12 || std::abs(points.back().s - 1.0) > 1e-12)
        throw Error(Errc::invalid_schedule, "s must run from 0 to 1");
    for (size_t i = 0; i + 1 < points.size(); ++i)
        if (points[i + 1].s <= points[i].s)
            throw Error(Errc::invalid_schedule, "s must be strictly increasing");
    for (const Point& p : points)
        if (p.f < 0 || p.g < 0) throw Error(Errc::invalid_schedule, "F and G must be >= 0");
}

AnnealSchedule AnnealSchedule::linear(double total_time) {
    return AnnealSchedule({{0.0, 0.0, 1.0}, {1.0, 1.0, 0.0}}, total_time);
}

namespace {

double interpolate(const std::vector<AnnealSchedule::Point>& pts, double s, bool f_part) {
    const double clamped = std::clamp(s, 0.0, 1.0);
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
        if (clamped <= pts[i + 1].s + 1e-15) {
            const double t = (clamped - pts[i].s) / (pts[i + 1].s - pts[i].s);
            return f_part ? pts[i].f + t * (pts[i + 1].f - pts[i].f)
                          : pts[i].g + t * (pts[i + 1].g - pts[i].g);
        }
    }
    return f_part ? pts.back().f : pts.back().g;
}

}  // namespace

double AnnealSchedule::f_at(double s) const { return interpolate(points, s, true); }
double AnnealSchedule::g_at(double s) const { return interpolate(points, s, false); }

std::vector<std::string> AnnealSchedule::warnings() const {
    std::vector<std::string> out;
    if (!(f_at(0.0) < 0.1 * g_at(0.0)))
        out.push_back("F(0) is not well below G(0); the initial state is a poor ground state");
    double peak = 0;
    for (const Point& p : points) peak = std::max({peak, p.f, p.g});
    if (g_at(1.0) > 1e-6 * std::max(1.0, peak))
        out.push_back("G(1) is not close to 0; the final Hamiltonian keeps a transverse part");
    return out;
}

AnnealSchedule AnnealSchedule::from_csv(const std::string& text, double total_time) {
    std::vector<Point> pts;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ls(line);
        Point p{};
        if (!(ls >> p.s >> p.f >> p.g)) {
            if (lineno == 1) continue;  // header row
            throw Error(Errc::invalid_schedule, "bad row at line " + std::to_string(lineno));
        }
        pts.push_back(p);
    }
    return AnnealSchedule(std::move(pts), total_time);
}

std::string AnnealSchedule::to_csv() const {
    std::ostringstream os;
    os << "s,F,G\n";
    char buf[96];
    for (const Point& p : points) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", p.s, p.f, p.g);
        os << buf;
    }
    return os.str();
}

namespace {

struct CompiledIsing {
    std::vector<std::string> vars;
    std::vector<double> h;
    std::vector<std::vector<std::pair<int, double>>> adjacency;  // var -> (other, J)
    std::vector<std::tuple<int, int, double>> pairs;
    double offset = 0;

    explicit CompiledIsing(const IsingModel& model) {
        if (model.vartype != Vartype::spin)
            throw Error(Errc::domain_violation, "sampler expects a spin model");
        vars = model.variables();
        offset = model.offset;
        std::map<std::string, int> index;
        for (size_t i = 0; i < vars.size(); ++i) index[vars[i]] = static_cast<int>(i);
        h.assign(vars.size(), 0.0);
        adjacency.resize(vars.size());
        for (const auto& [v, bias] : model.linear) h[static_cast<size_t>(index[v])] = bias;
        for (const auto& [p, j] : model.quadratic) {
            const int a = index[p.first], b = index[p.second];
            adjacency[static_cast<size_t>(a)].push_back({b, j});
            adjacency[static_cast<size_t>(b)].push_back({a, j});
            pairs.emplace_back(a, b, j);
        }
    }

    int n() const { return static_cast<int>(vars.size()); }

    double energy_of(const std::vector<int>& spins) const {
        double e = offset;
        for (size_t i = 0; i < h.size(); ++i) e += h[i] * spins[i];
        for (const auto& [a, b, j] : pairs) e += j * spins[static_cast<size_t>(a)] * spins[static_cast<size_t>(b)];
        return e;
    }

    // energy change of flipping spin i
    double flip_delta(const std::vector<int>& spins, int i) const {
        double field = h[static_cast<size_t>(i)];
        for (const auto& [other, j] : adjacency[static_cast<size_t>(i)]) field += j * spins[static_cast<size_t>(other)];
        return -2.0 * spins[static_cast<size_t>(i)] * field;
    }

    Assignment assignment_of(const std::vector<int>& spins) const {
        Assignment a;
        for (size_t i = 0; i < vars.size(); ++i) a[vars[i]] = spins[i];
        return a;
    }
};

std::vector<int> random_spins(int n, Rng& rng) {
    std::vector<int> s(static_cast<size_t>(n));
    for (auto& v : s) v = rng.coin() ? 1 : -1;
    return s;
}

void metropolis_sweep(const CompiledIsing& cm, std::vector<int>& spins, double beta, Rng& rng) {
    for (int i = 0; i < cm.n(); ++i) {
        const double delta = cm.flip_delta(spins, i);
        // zero-cost moves take a fair coin: sequential sweeps with
        // always-accepted ties lock domain walls into translating cycles
        const bool accept = delta < 0   ? true
                            : delta == 0 ? rng.coin()
                                         : rng.uniform() < std::exp(-beta * delta);
        if (accept) spins[static_cast<size_t>(i)] = -spins[static_cast<size_t>(i)];
    }
}

}  // namespace

SampleSet simulated_anneal(const IsingModel& model, int sweeps, BetaSchedule beta, int reads,
                           std::uint64_t seed, int threads) {
    if (reads < 1 || sweeps < 1)
        throw Error(Errc::invalid_input, "reads and sweeps must be >= 1");
    if (!(beta.beta_min > 0) || beta.beta_max < beta.beta_min)
        throw Error(Errc::invalid_input, "need 0 < beta_min <= beta_max");
    CompiledIsing cm(model);
    if (cm.n() == 0) throw Error(Errc::empty_model, "the model has no variables");

    // geometric ladder, one value per sweep
    std::vector<double> betas(static_cast<size_t>(sweeps));
    const double ratio = beta.beta_max / beta.beta_min;
    for (int t = 0; t < sweeps; ++t)
        betas[static_cast<size_t>(t)] =
            sweeps == 1 ? beta.beta_max
                        : beta.beta_min * std::pow(ratio, static_cast<double>(t) / (sweeps - 1));

    std::vector<Sample> records(static_cast<size_t>(reads));
    auto run_read = [&](int r) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(r)));
        std::vector<int> spins = random_spins(cm.n(), rng);
        for (double b : betas) metropolis_sweep(cm, spins, b, rng);
        Sample rec;
        rec.assignment = cm.assignment_of(spins);
        rec.energy = cm.energy_of(spins);
        rec.occurrences = 1;
        records[static_cast<size_t>(r)] = std::move(rec);
    };

    if (threads <= 1) {
        for (int r = 0; r < reads; ++r) run_read(r);
    } else {
        std::vector<std::thread> pool;
        std::atomic<int> next{0};
        for (int t = 0; t < threads; ++t)
            pool.emplace_back([&] {
                for (int r = next.fetch_add(1); r < reads; r = next.fetch_add(1)) run_read(r);
            });
        for (auto& th : pool) th.join();
    }

    SampleSet out;
    out.records = std::move(records);
    return out;
}

std::map<Assignment, long> metropolis_histogram(const IsingModel& model, double beta, int sweeps,
                                                double burn_in_fraction, std::uint64_t seed) {
    if (!(beta > 0)) throw Error(Errc::non_positive_t, "beta must be > 0");
    if (sweeps < 1) throw Error(Errc::invalid_input, "sweeps must be >= 1");
    CompiledIsing cm(model);
    if (cm.n() == 0) throw Error(Errc::empty_model, "the model has no variables");

    Rng rng(seed);
    std::vector<int> spins = random_spins(cm.n(), rng);
    const int burn = static_cast<int>(sweeps * std::clamp(burn_in_fraction, 0.0, 0.9));
    std::map<Assignment, long> counts;
    for (int t = 0; t < sweeps; ++t) {
        metropolis_sweep(cm, spins, beta, rng);
        if (t >= burn) ++counts[cm.assignment_of(spins)];
    }
    return counts;
}

TransverseFieldHamiltonian::TransverseFieldHamiltonian(IsingModel p) : problem(std::move(p)) {
    if (problem.num_variables() > 10)
        throw Error(Errc::too_many_variables, "dense evolution supports at most 10 variables");
    if (problem.vartype != Vartype::spin)
        throw Error(Errc::domain_violation, "dense evolution expects a spin model");
}

EvolutionResult adiabatic_evolve(const TransverseFieldHamiltonian& h,
                                 const AnnealSchedule& schedule, double dt, std::uint64_t seed,
                                 int reads) {
    if (!(dt > 0)) throw Error(Errc::invalid_input, "dt must be > 0");
    if (reads < 0) throw Error(Errc::invalid_input, "reads must be >= 0");
    CompiledIsing cm(h.problem);
    const int n = cm.n();
    if (n == 0) throw Error(Errc::empty_model, "the model has no variables");

    const std::size_t dim = std::size_t(1) << n;
    // diagonal problem energies; basis bit = 1 reads as spin +1
    std::vector<double> diag(dim);
    {
        std::vector<int> spins(static_cast<size_t>(n));
        for (std::size_t b = 0; b < dim; ++b) {
            for (int i = 0; i < n; ++i) spins[static_cast<size_t>(i)] = (b >> i) & 1 ? 1 : -1;
            diag[b] = cm.energy_of(spins);
        }
    }

    Vec state = Vec::Constant(static_cast<Eigen::Index>(dim), cxd(1.0 / std::sqrt(static_cast<double>(dim)), 0));

    const double total = schedule.total_time;
    const long steps = std::max(1L, std::lround(total / dt));
    const double step = total / static_cast<double>(steps);

    auto apply_diag = [&](double weight) {
        if (weight == 0) return;
        for (std::size_t b = 0; b < dim; ++b) state(static_cast<Eigen::Index>(b)) *= std::polar(1.0, -weight * diag[b]);
    };
    auto apply_transverse = [&](double weight) {
        if (weight == 0) return;
        // exp(-i * weight * (-sum X_i)) = prod_i exp(i * weight * X_i)
        const double c = std::cos(weight), s = std::sin(weight);
        for (int q = 0; q < n; ++q) {
            const std::size_t bit = std::size_t(1) << q;
            for (std::size_t b = 0; b < dim; ++b) {
                if (b & bit) continue;
                const cxd a0 = state(static_cast<Eigen::Index>(b));
                const cxd a1 = state(static_cast<Eigen::Index>(b | bit));
                state(static_cast<Eigen::Index>(b)) = c * a0 + cxd(0, s) * a1;
                state(static_cast<Eigen::Index>(b | bit)) = cxd(0, s) * a0 + c * a1;
            }
        }
    };

    for (long k = 0; k < steps; ++k) {
        const double s_mid = (static_cast<double>(k) + 0.5) * step / total;
        const double f = schedule.f_at(s_mid), g = schedule.g_at(s_mid);
        apply_diag(0.5 * step * f);
        apply_transverse(step * g);
        apply_diag(0.5 * step * f);
    }

    EvolutionResult out;
    out.vars = cm.vars;
    out.norm_drift = std::abs(state.norm() - 1.0);
    if (out.norm_drift > 1e-6)
        throw Error(Errc::norm_drift, "statevector norm drifted by " + std::to_string(out.norm_drift));

    // measurement samples from |amplitude|^2
    std::vector<std::pair<Assignment, long>> draws;
    if (reads > 0) {
        std::vector<double> cdf(dim);
        double acc = 0;
        for (std::size_t b = 0; b < dim; ++b) {
            acc += std::norm(state(static_cast<Eigen::Index>(b)));
            cdf[b] = acc;
        }
        Rng rng(seed);
        std::map<std::size_t, long> counts;
        for (int r = 0; r < reads; ++r) {
            const double x = rng.uniform() * acc;
            const std::size_t b = static_cast<std::size_t>(
                std::lower_bound(cdf.begin(), cdf.end(), x) - cdf.begin());
            ++counts[std::min(b, dim - 1)];
        }
        std::vector<int> spins(static_cast<size_t>(n));
        for (const auto& [b, cnt] : counts) {
            for (int i = 0; i < n; ++i) spins[static_cast<size_t>(i)] = (b >> i) & 1 ? 1 : -1;
            draws.push_back({cm.assignment_of(spins), cnt});
        }
    }
    out.samples = SampleSet::make(h.problem, draws);
    out.state = std::move(state);
    return out;
}

double ground_state_population(const IsingModel& model, const EvolutionResult& evolved) {
    CompiledIsing cm(model);
    const std::size_t dim = std::size_t(1) << cm.n();
    if (static_cast<Eigen::Index>(dim) != evolved.state.size())
        throw Error(Errc::dimension_mismatch, "state size does not match the model");
    double ground = 1e300;
    std::vector<double> diag(dim);
    std::vector<int> spins(static_cast<size_t>(cm.n()));
    for (std::size_t b = 0; b < dim; ++b) {
        for (int i = 0; i < cm.n(); ++i) spins[static_cast<size_t>(i)] = (b >> i) & 1 ? 1 : -1;
        diag[b] = cm.energy_of(spins);
        ground = std::min(ground, diag[b]);
    }
    double mass = 0;
    for (std::size_t b = 0; b < dim; ++b)
        if (diag[b] <= ground + 1e-9) mass += std::norm(evolved.state(static_cast<Eigen::Index>(b)));
    return mass;
}

IceNoise::IceNoise(double mh, double sh, double mj, double sj)
    : mu_h(mh), sigma_h(sh), mu_J(mj), sigma_J(sj) {
    if (sh < 0 || sj < 0) throw Error(Errc::invalid_input, "sigmas must be >= 0");
}

IsingModel perturb_ice(const IsingModel& model, const IceNoise& noise, std::uint64_t seed) {
    IsingModel out = model;
    Rng rng(seed);
    for (auto& [v, h] : out.linear) h += noise.mu_h + noise.sigma_h * rng.normal();
    for (auto& [p, j] : out.quadratic) j += noise.mu_J + noise.sigma_J * rng.normal();
    return out;
}

double estimate_teff(const IsingModel& model, const SampleSet& samples) {
    // aggregate by assignment, recompute energies against the model
    std::map<Assignment, long> counts;
    for (const Sample& r : samples.records) counts[r.assignment] += r.occurrences;

    std::vector<std::pair<double, double>> points;  // (energy, log count)
    for (const auto& [a, c] : counts) {
        if (c < 10) continue;  // too noisy for the ratio fit
        points.push_back({energy(model, a), std::log(static_cast<double>(c))});
    }

    double sxx = 0, sxy = 0;
    long used_pairs = 0;
    bool distinct = false;
    for (size_t i = 0; i < points.size(); ++i)
        for (size_t j = i + 1; j < points.size(); ++j) {
            const double de = points[j].first - points[i].first;
            if (std::abs(de) < 1e-12) continue;
            distinct = true;
            const double dl = points[i].second - points[j].second;  // log(c_i / c_j)
            sxx += de * de;
            sxy += de * dl;
            ++used_pairs;
        }
    if (!distinct || used_pairs == 0)
        throw Error(Errc::degenerate_spectrum_observed,
                    "samples span fewer than two energy levels");
    // log(c_i/c_j) ~ (E_j - E_i)/T  =>  slope 1/T
    if (sxy <= 0)
        throw Error(Errc::degenerate_spectrum_observed,
                    "sample counts do not decrease with energy");
    return sxx / sxy;
}

SampleSet boltzmann_sample(const IsingModel& model, double T, int reads, std::uint64_t seed) {
    if (reads < 1) throw Error(Errc::invalid_input, "reads must be >= 1");
    Distribution d = boltzmann_distribution(model, T);
    std::vector<double> cdf(d.probs.size());
    double acc = 0;
    for (size_t i = 0; i < d.probs.size(); ++i) {
        acc += d.probs[i];
        cdf[i] = acc;
    }
    Rng rng(seed);
    std::map<std::size_t, long> counts;
    for (int r = 0; r < reads; ++r) {
        const double x = rng.uniform() * acc;
        const std::size_t idx = static_cast<std::size_t>(
            std::lower_bound(cdf.begin(), cdf.end(), x) - cdf.begin());
        ++counts[std::min(idx, d.probs.size() - 1)];
    }
    std::vector<std::pair<Assignment, long>> draws;
    for (const auto& [idx, c] : counts) draws.push_back({d.assignment_of(idx), c});
    return SampleSet::make(model, draws);
}

}  // namespace qct
