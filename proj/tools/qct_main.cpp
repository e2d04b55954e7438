#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <iostream>
#include <json.hpp>

#include "qct/embed.hpp"
#include "qct/error.hpp"
#include "qct/io.hpp"
#include "qct/ising.hpp"
#include "qct/qasm.hpp"
#include "qct/route.hpp"
#include "qct/rng.hpp"
#include "qct/sampler.hpp"
#include "qct/sk.hpp"
#include "qct/synth.hpp"

using nlohmann::json;
using namespace qct;

namespace {

constexpr const char* kVersion = "0.1.0";

double now_ms() {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

void write_or_print(const std::string& path, const std::string& content) {
    if (path.empty())
        std::cout << content;
    else
        write_file(path, content);
}

json metrics_json(const CircuitMetrics& m) {
    return json{{"depth", m.depth}, {"gate_count", m.gate_count},
                {"two_qubit_count", m.two_qubit_count}};
}

// "rz(0.37)", "u3(0.1,0.2,0.3)", "h", "cx"
Mat parse_gate_spec(const std::string& spec) {
    std::string name = spec;
    std::vector<double> params;
    const auto open = spec.find('(');
    if (open != std::string::npos) {
        if (spec.back() != ')') throw Error(Errc::invalid_input, "bad gate spec '" + spec + "'");
        name = spec.substr(0, open);
        std::string args = spec.substr(open + 1, spec.size() - open - 2);
        std::istringstream is(args);
        std::string tok;
        while (std::getline(is, tok, ',')) {
            try {
                params.push_back(std::stod(tok));
            } catch (const std::exception&) {
                throw Error(Errc::invalid_input, "bad angle '" + tok + "' in gate spec");
            }
        }
    }
    const auto kind = gate_kind_from_name(name);
    if (!kind || *kind == GateKind::custom || *kind == GateKind::measure)
        throw Error(Errc::unknown_gate, "'" + name + "' in gate spec");
    std::vector<int> qubits;
    for (int q = 0; q < gate_arity(*kind); ++q) qubits.push_back(q);
    return Gate(*kind, qubits, params).local_matrix();
}

struct SamplerOptions {
    std::string sampler = "sa";
    int sweeps = 1000;
    int reads = 100;
    double beta_min = 0.1;
    double beta_max = 10.0;
    std::string schedule_file;
    double total_time = 100.0;
    double dt = 0.0;
    std::vector<double> ice;  // mu_h sigma_h mu_J sigma_J
    bool estimate_teff_flag = false;
    int threads = 1;

    void attach(CLI::App* cmd) {
        cmd->add_option("--sampler", sampler, "sa, adiabatic or brute")
            ->check(CLI::IsMember({"sa", "adiabatic", "brute"}));
        cmd->add_option("--sweeps", sweeps, "metropolis sweeps per read");
        cmd->add_option("--reads", reads, "number of samples / independent runs");
        cmd->add_option("--beta-min", beta_min, "initial inverse temperature");
        cmd->add_option("--beta-max", beta_max, "final inverse temperature");
        cmd->add_option("--schedule", schedule_file, "annealing schedule csv (s,F,G rows)");
        cmd->add_option("--total-time", total_time, "total evolution time");
        cmd->add_option("--dt", dt, "integrator step (default total-time/1000)");
        cmd->add_option("--ice", ice, "control error: mu_h sigma_h mu_J sigma_J")
            ->expected(4);
        cmd->add_flag("--estimate-teff", estimate_teff_flag,
                      "fit the effective temperature of the samples");
        cmd->add_option("--threads", threads, "worker threads for the reads");
    }
};

// Runs the chosen sampler on a spin model. Per-stage seeds derive from the
// global seed, so partial pipelines reproduce full-pipeline behaviour.
SampleSet run_sampler(const IsingModel& model, const SamplerOptions& opt, std::uint64_t seed,
                      json& report) {
    IsingModel working = model;
    if (!opt.ice.empty()) {
        working = perturb_ice(model, IceNoise(opt.ice[0], opt.ice[1], opt.ice[2], opt.ice[3]),
                              stage_seed(seed, "ice"));
        report["ice"] = {{"mu_h", opt.ice[0]}, {"sigma_h", opt.ice[1]}, {"mu_J", opt.ice[2]},
                         {"sigma_J", opt.ice[3]}};
    }

    if (opt.sampler == "sa") {
        return simulated_anneal(working, opt.sweeps, {opt.beta_min, opt.beta_max}, opt.reads,
                                stage_seed(seed, "sa"), opt.threads);
    }
    if (opt.sampler == "brute") {
        GroundSet g = brute_force_solve(working);
        std::vector<std::pair<Assignment, long>> draws;
        for (const auto& a : g.assignments) draws.push_back({a, 1});
        return SampleSet::make(working, draws);
    }
    // adiabatic
    AnnealSchedule schedule = opt.schedule_file.empty()
                                  ? AnnealSchedule::linear(opt.total_time)
                                  : AnnealSchedule::from_csv(read_file(opt.schedule_file),
                                                             opt.total_time);
    for (const auto& w : schedule.warnings()) std::cerr << "warning: " << w << "\n";
    const double dt = opt.dt > 0 ? opt.dt : schedule.total_time / 1000.0;
    TransverseFieldHamiltonian h(working);
    EvolutionResult evolved =
        adiabatic_evolve(h, schedule, dt, stage_seed(seed, "adiabatic"), opt.reads);
    report["ground_population"] = ground_state_population(working, evolved);
    report["norm_drift"] = evolved.norm_drift;
    return evolved.samples;
}

json sample_report(const SampleSet& aggregated, const QuadraticModel& model) {
    json rep;
    rep["reads"] = aggregated.total_occurrences();
    rep["distinct_assignments"] = aggregated.records.size();
    if (const Sample* best = aggregated.best()) rep["best_energy"] = best->energy;
    json hist = json::array();
    double cbf = 0;
    for (const Sample& r : aggregated.records) {
        hist.push_back(json::array({r.energy, r.occurrences}));
        cbf += r.chain_break_fraction * static_cast<double>(r.occurrences);
    }
    rep["energy_histogram"] = std::move(hist);
    const long total = aggregated.total_occurrences();
    rep["mean_chain_break_fraction"] = total ? cbf / static_cast<double>(total) : 0.0;
    rep["num_variables"] = model.num_variables();
    return rep;
}

// spin samples -> the binary domain of `binary_model`
SampleSet to_binary_domain(const SampleSet& spin_samples, const QuadraticModel& binary_model) {
    SampleSet out;
    out.records.reserve(spin_samples.records.size());
    for (const Sample& r : spin_samples.records) {
        Sample b = r;
        for (auto& [v, val] : b.assignment) val = (val + 1) / 2;
        b.energy = energy(binary_model, b.assignment);
        out.records.push_back(std::move(b));
    }
    return out;
}

int cmd_transpile(const std::string& in_file, const std::string& coupling_file,
                  const std::string& layout_name, const std::string& routing, int window,
                  std::uint64_t seed, const std::string& out_file,
                  const std::string& metrics_file) {
    const Circuit input = parse_qasm(read_file(in_file));
    const CouplingGraph graph = load_coupling_json(read_file(coupling_file));
    const Layout layout = choose_layout(
        input, graph, layout_name == "dense" ? LayoutStrategy::dense : LayoutStrategy::trivial,
        stage_seed(seed, "layout"));

    Circuit routed(graph.num_nodes);
    Layout final_layout = layout;
    int swaps = 0;
    if (routing == "cascade") {
        routed = route_cascade(input, graph, layout);
        swaps = count_swaps(routed);
    } else {
        RoutedCircuit r = route_lookahead(input, graph, layout, window, stage_seed(seed, "routing"));
        routed = std::move(r.circuit);
        final_layout = std::move(r.final_layout);
        swaps = r.swaps_added;
    }
    const Circuit fixed = fix_directions(routed, graph);

    json rep;
    rep["input"] = metrics_json(metrics(input));
    rep["output"] = metrics_json(metrics(fixed));
    rep["swaps_added"] = swaps;
    rep["initial_layout"] = json::parse(layout_to_json(layout));
    rep["final_layout"] = json::parse(layout_to_json(final_layout));
    if (graph.num_nodes <= 10) {
        Circuit no_measure_in = input;   // verification needs unitary circuits
        Circuit no_measure_out = fixed;
        auto strip = [](Circuit& c) {
            std::erase_if(c.gates, [](const Gate& g) { return g.kind == GateKind::measure; });
        };
        strip(no_measure_in);
        strip(no_measure_out);
        rep["verification"] =
            verify_routed(no_measure_in, no_measure_out, layout, final_layout) ? "pass" : "fail";
    } else {
        rep["verification"] = "skipped";
    }

    write_or_print(out_file, emit_qasm(fixed));
    write_or_print(metrics_file, rep.dump(2) + "\n");
    return 0;
}

int cmd_synth(const std::string& unitary_file, const std::string& gate_spec,
              const std::string& mode, const std::vector<std::string>& basis_names, int l0,
              int depth, double epsilon, const std::string& net_cache,
              const std::string& out_file, const std::string& report_file) {
    const Mat target = unitary_file.empty() ? parse_gate_spec(gate_spec)
                                            : load_unitary_json(read_file(unitary_file));
    if (!is_unitary(target)) throw Error(Errc::not_unitary, "the synthesis target is not unitary");

    json rep;
    Circuit circuit(1);
    double precompile_ms = 0, execute_ms = 0;

    if (mode == "exact") {
        const double t0 = now_ms();
        circuit = rebase_to_u3(synthesize_exact(target));
        execute_ms = now_ms() - t0;
        rep["distance"] = distance(compose_unitary(circuit).m, target);
    } else {
        if (target.rows() != 2)
            throw Error(Errc::dimension_mismatch, "approximate mode handles single-qubit targets");
        const GateBasis basis = GateBasis::from_names(basis_names);

        double t0 = now_ms();
        std::optional<SKNet> net;
        if (!net_cache.empty()) {
            try {
                SKNet cached = SKNet::load(net_cache);
                if (cached.l0() >= l0 && cached.basis().content_hash() == basis.content_hash())
                    net = std::move(cached);
            } catch (const Error&) {
                // stale or foreign cache: rebuild below
            }
        }
        if (!net) {
            net = sk_precompile(basis, l0);
            if (!net_cache.empty()) net->save(net_cache);
        }
        precompile_ms = now_ms() - t0;
        rep["net_entries"] = net->entries().size();
        rep["net_eps0"] = net->eps0();

        t0 = now_ms();
        SkApprox approx;
        int used_depth = depth;
        if (epsilon > 0) {
            for (used_depth = 0; used_depth <= depth; ++used_depth) {
                approx = sk_compile(target, *net, used_depth);
                if (approx.dist <= epsilon) break;
            }
            used_depth = std::min(used_depth, depth);
        } else {
            approx = sk_compile(target, *net, depth);
        }
        execute_ms = now_ms() - t0;
        circuit = sequence_circuit(*net, approx.seq);
        rep["distance"] = approx.dist;
        rep["depth_used"] = used_depth;
    }

    rep["length"] = circuit.gates.size();
    rep["two_qubit_count"] = metrics(circuit).two_qubit_count;
    rep["precompile_ms"] = precompile_ms;
    rep["execute_ms"] = execute_ms;
    write_or_print(out_file, emit_qasm(circuit));
    write_or_print(report_file, rep.dump(2) + "\n");
    return 0;
}

int cmd_reduce(const std::string& model_file, double M, bool negate, const std::string& out_file,
               const std::string& log_file) {
    LoadedModel loaded = load_model_json(read_file(model_file), negate);
    json log;
    QuboModel qubo(Vartype::binary);
    if (loaded.hubo) {
        const double weight = M > 0 ? M : default_reduction_weight(*loaded.hubo);
        HuboReduction red = reduce_hubo(*loaded.hubo, weight);
        qubo = std::move(red.qubo);
        json subs = json::array();
        for (const auto& s : red.substitutions)
            subs.push_back({{"aux", s.aux}, {"x", s.x}, {"y", s.y}});
        log["substitutions"] = std::move(subs);
        log["penalty_weight"] = red.penalty_weight;
    } else {
        if (loaded.quadratic->vartype != Vartype::binary)
            throw Error(Errc::invalid_input, "reduction expects a BINARY model");
        qubo = *loaded.quadratic;
        log["substitutions"] = json::array();
        log["penalty_weight"] = 0.0;
    }
    write_or_print(out_file, model_to_json(qubo));
    write_or_print(log_file, log.dump(2) + "\n");
    return 0;
}

int cmd_embed(const std::string& model_file, const std::string& target_file, int tries,
              bool negate, std::uint64_t seed, const std::string& out_file,
              const std::string& report_file) {
    LoadedModel loaded = load_model_json(read_file(model_file), negate);
    if (!loaded.quadratic)
        throw Error(Errc::invalid_input, "embedding expects a quadratic model; reduce first");
    const HardwareGraph target = load_hardware_json(read_file(target_file));
    const SourceGraph source = SourceGraph::from_model(*loaded.quadratic);
    const Embedding emb = find_embedding(source, target, stage_seed(seed, "embedding"), tries);
    const EmbeddingReport rep = validate_embedding(source, target, emb);

    json j;
    j["valid"] = rep.ok();
    j["max_chain_length"] = rep.max_chain_length;
    j["min_chain_length"] = rep.min_chain_length;
    json hist = json::object();
    for (const auto& [len, count] : rep.chain_length_histogram)
        hist[std::to_string(len)] = count;
    j["chain_length_histogram"] = std::move(hist);

    write_or_print(out_file, embedding_to_json(emb));
    write_or_print(report_file, j.dump(2) + "\n");
    return 0;
}

int cmd_sample(const std::string& model_file, bool negate, const SamplerOptions& opt,
               std::uint64_t seed, const std::string& out_file, const std::string& report_file) {
    LoadedModel loaded = load_model_json(read_file(model_file), negate);
    if (!loaded.quadratic)
        throw Error(Errc::invalid_input, "sample expects a quadratic model; use solve for HUBOs");
    const QuadraticModel& original = *loaded.quadratic;
    const IsingModel ising =
        original.vartype == Vartype::spin ? original : qubo_to_ising(original);

    json rep;
    SampleSet samples = run_sampler(ising, opt, seed, rep);
    if (original.vartype == Vartype::binary) samples = to_binary_domain(samples, original);
    SampleSet aggregated = samples.aggregated();

    rep.update(sample_report(aggregated, original));
    if (opt.estimate_teff_flag) rep["teff"] = estimate_teff(original, aggregated);

    write_or_print(out_file, samples_to_jsonl(aggregated));
    write_or_print(report_file, rep.dump(2) + "\n");
    return 0;
}

int cmd_solve(const std::string& model_file, bool negate, double M,
              const std::string& target_file, const std::string& embedding_file,
              double chain_strength, int clone_count, int tries, const SamplerOptions& opt,
              std::uint64_t seed, const std::string& out_file, const std::string& report_file) {
    LoadedModel loaded = load_model_json(read_file(model_file), negate);
    json rep;

    // 1. reduce when higher-order
    QuadraticModel working(Vartype::binary);
    if (loaded.hubo) {
        const double weight = M > 0 ? M : default_reduction_weight(*loaded.hubo);
        HuboReduction red = reduce_hubo(*loaded.hubo, weight);
        working = std::move(red.qubo);
        json subs = json::array();
        for (const auto& s : red.substitutions)
            subs.push_back({{"aux", s.aux}, {"x", s.x}, {"y", s.y}});
        rep["reduction"] = {{"substitutions", std::move(subs)}, {"penalty_weight", weight}};
    } else {
        working = *loaded.quadratic;
    }
    const IsingModel ising = working.vartype == Vartype::spin ? working : qubo_to_ising(working);

    // 2. embed onto hardware when a target graph is given
    SampleSet logical_samples;
    if (!target_file.empty()) {
        const HardwareGraph target = load_hardware_json(read_file(target_file));
        const SourceGraph source = SourceGraph::from_model(ising);
        const Embedding emb =
            embedding_file.empty()
                ? find_embedding(source, target, stage_seed(seed, "embedding"), tries)
                : load_embedding_json(read_file(embedding_file));
        const EmbeddingReport erep = validate_embedding(source, target, emb);
        if (!erep.ok())
            throw Error(Errc::invalid_embedding,
                        erep.violations.empty() ? "invalid embedding" : erep.violations.front());
        const double strength =
            chain_strength > 0 ? chain_strength : default_chain_strength(ising, emb);
        rep["embedding"] = {{"max_chain_length", erep.max_chain_length},
                            {"chain_strength", strength}};

        if (clone_count > 1) {
            ClonedProblem cloned =
                clone_problem(ising, target, emb, clone_count, strength, stage_seed(seed, "clone"));
            SampleSet phys = run_sampler(cloned.physical, opt, seed, rep);
            logical_samples =
                unembed_clones(phys, cloned.replicas, ising, stage_seed(seed, "ties"));
            rep["embedding"]["replicas"] = cloned.replicas.size();
        } else {
            IsingModel physical = embed_ising(ising, emb, target, strength);
            SampleSet phys = run_sampler(physical, opt, seed, rep);
            logical_samples = unembed_samples(phys, emb, ising, stage_seed(seed, "ties"));
        }
    } else {
        logical_samples = run_sampler(ising, opt, seed, rep);
    }

    // 3. back to the input domain
    if (working.vartype == Vartype::binary)
        logical_samples = to_binary_domain(logical_samples, working);
    SampleSet aggregated = logical_samples.aggregated();

    rep.update(sample_report(aggregated, working));
    if (loaded.hubo && aggregated.best()) {
        Assignment proj;
        for (const auto& v : loaded.hubo->variables()) proj[v] = aggregated.best()->assignment.at(v);
        rep["hubo_energy_of_best"] = energy(*loaded.hubo, proj);
    }
    if (opt.estimate_teff_flag) rep["teff"] = estimate_teff(working, aggregated);

    write_or_print(out_file, samples_to_jsonl(aggregated));
    write_or_print(report_file, rep.dump(2) + "\n");
    return 0;
}

int cmd_stats(const std::string& samples_file, const std::string& model_file, bool negate,
              bool teff, const std::string& report_file) {
    SampleSet samples = load_samples_jsonl(read_file(samples_file));
    LoadedModel loaded = load_model_json(read_file(model_file), negate);
    if (!loaded.quadratic)
        throw Error(Errc::invalid_input, "stats expects a quadratic model");
    // re-anchor the stored energies against the model
    for (Sample& r : samples.records) r.energy = energy(*loaded.quadratic, r.assignment);
    SampleSet aggregated = samples.aggregated();
    json rep = sample_report(aggregated, *loaded.quadratic);
    double weighted = 0;
    for (const Sample& r : aggregated.records)
        weighted += r.energy * static_cast<double>(r.occurrences);
    rep["mean_energy"] =
        aggregated.total_occurrences()
            ? weighted / static_cast<double>(aggregated.total_occurrences())
            : 0.0;
    if (teff) rep["teff"] = estimate_teff(*loaded.quadratic, aggregated);
    write_or_print(report_file, rep.dump(2) + "\n");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"qct - gate-model and annealing compilation toolkit"};
    app.require_subcommand(0, 1);

    bool show_version = false;
    app.add_flag("--version", show_version, "print tool and schema versions");

    std::uint64_t seed = 0;
    app.add_option("--seed", seed, "global seed; per-stage seeds derive from it");

    // transpile
    auto* transpile = app.add_subcommand("transpile", "route a circuit onto a coupling graph");
    std::string t_in, t_coupling, t_layout = "trivial", t_routing = "lookahead";
    std::string t_out, t_metrics;
    int t_window = 4;
    transpile->add_option("--in", t_in, "input qasm file")->required();
    transpile->add_option("--coupling", t_coupling, "coupling graph json")->required();
    transpile->add_option("--layout", t_layout, "trivial or dense")
        ->check(CLI::IsMember({"trivial", "dense"}));
    transpile->add_option("--routing", t_routing, "cascade or lookahead")
        ->check(CLI::IsMember({"cascade", "lookahead"}));
    transpile->add_option("--window", t_window, "look-ahead window (two-qubit gates)");
    transpile->add_option("--out", t_out, "routed qasm output (default stdout)");
    transpile->add_option("--metrics", t_metrics, "metrics json output (default stdout)");

    // synth
    auto* synth = app.add_subcommand("synth", "compile a unitary into gates");
    std::string s_unitary, s_gate, s_mode = "exact", s_net_cache, s_out, s_report;
    std::vector<std::string> s_basis{"h", "t", "tdg"};
    int s_l0 = 10, s_depth = 3;
    double s_epsilon = 0;
    synth->add_option("--unitary", s_unitary, "unitary json file");
    synth->add_option("--gate", s_gate, "gate spec such as rz(0.37)");
    synth->add_option("--mode", s_mode, "exact or sk")->check(CLI::IsMember({"exact", "sk"}));
    synth->add_option("--basis", s_basis, "basis gate names for sk mode");
    synth->add_option("--l0", s_l0, "table sequence length for sk mode");
    synth->add_option("--depth", s_depth, "recursion depth (sk)");
    synth->add_option("--epsilon", s_epsilon, "target accuracy; uses the smallest depth reaching it");
    synth->add_option("--net-cache", s_net_cache, "binary cache file for the lookup table");
    synth->add_option("--out", s_out, "qasm output (default stdout)");
    synth->add_option("--report", s_report, "report json output (default stdout)");

    // reduce
    auto* reduce = app.add_subcommand("reduce", "quadratize a higher-order model");
    std::string r_model, r_out, r_log;
    double r_m = 0;
    bool r_negate = false;
    reduce->add_option("--model", r_model, "model json file")->required();
    reduce->add_option("--M", r_m, "penalty weight (default 1 + 2 sum |coeff|)");
    reduce->add_flag("--negate", r_negate, "flip all coefficient signs on load");
    reduce->add_option("--out", r_out, "reduced model output (default stdout)");
    reduce->add_option("--log", r_log, "substitution log output (default stdout)");

    // embed
    auto* embed = app.add_subcommand("embed", "find a minor embedding");
    std::string e_model, e_target, e_out, e_report;
    int e_tries = 16;
    bool e_negate = false;
    embed->add_option("--model", e_model, "model json file")->required();
    embed->add_option("--target", e_target, "hardware graph json")->required();
    embed->add_option("--tries", e_tries, "restart attempts");
    embed->add_flag("--negate", e_negate, "flip all coefficient signs on load");
    embed->add_option("--out", e_out, "embedding json output (default stdout)");
    embed->add_option("--report", e_report, "validation report output (default stdout)");

    // sample
    auto* sample = app.add_subcommand("sample", "run a sampler on a quadratic model");
    std::string sa_model, sa_out, sa_report;
    bool sa_negate = false;
    SamplerOptions sa_opt;
    sample->add_option("--model", sa_model, "model json file")->required();
    sample->add_flag("--negate", sa_negate, "flip all coefficient signs on load");
    sa_opt.attach(sample);
    sample->add_option("--out", sa_out, "samples jsonl output (default stdout)");
    sample->add_option("--report", sa_report, "report json output (default stdout)");

    // solve
    auto* solve = app.add_subcommand("solve", "reduce, embed and sample a model");
    std::string so_model, so_target, so_embedding, so_out, so_report;
    double so_m = 0, so_chain = 0;
    int so_clone = 1, so_tries = 16;
    bool so_negate = false;
    SamplerOptions so_opt;
    solve->add_option("--model", so_model, "model json file")->required();
    solve->add_flag("--negate", so_negate, "flip all coefficient signs on load");
    solve->add_option("--M", so_m, "reduction penalty weight");
    solve->add_option("--target", so_target, "hardware graph json (enables embedding)");
    solve->add_option("--embedding", so_embedding, "use this embedding file instead of searching");
    solve->add_option("--chain-strength", so_chain, "ferromagnetic chain coupling magnitude");
    solve->add_option("--clone", so_clone, "number of problem replicas");
    solve->add_option("--tries", so_tries, "embedding restart attempts");
    so_opt.attach(solve);
    solve->add_option("--out", so_out, "samples jsonl output (default stdout)");
    solve->add_option("--report", so_report, "report json output (default stdout)");

    // stats
    auto* stats = app.add_subcommand("stats", "summarize a samples file");
    std::string st_samples, st_model, st_report;
    bool st_negate = false, st_teff = false;
    stats->add_option("--samples", st_samples, "samples jsonl file")->required();
    stats->add_option("--model", st_model, "model json file")->required();
    stats->add_flag("--negate", st_negate, "flip all coefficient signs on load");
    stats->add_flag("--estimate-teff", st_teff, "fit the effective temperature");
    stats->add_option("--report", st_report, "report json output (default stdout)");

    CLI11_PARSE(app, argc, argv);

    if (show_version) {
        json v;
        v["qct"] = kVersion;
        v["schemas"] = {{"qasm", kSchemaQasm},       {"coupling", kSchemaCoupling},
                        {"model", kSchemaModel},     {"embedding", kSchemaEmbedding},
                        {"samples", kSchemaSamples}, {"schedule", kSchemaSchedule},
                        {"sknet", kSchemaSknet}};
        std::cout << v.dump(2) << "\n";
        return 0;
    }
    if (app.get_subcommands().empty()) {
        std::cerr << app.help();
        return 2;
    }

    try {
        if (transpile->parsed())
            return cmd_transpile(t_in, t_coupling, t_layout, t_routing, t_window, seed, t_out,
                                 t_metrics);
        if (synth->parsed()) {
            if (s_unitary.empty() == s_gate.empty())
                throw Error(Errc::invalid_input, "give exactly one of --unitary or --gate");
            return cmd_synth(s_unitary, s_gate, s_mode, s_basis, s_l0, s_depth, s_epsilon,
                             s_net_cache, s_out, s_report);
        }
        if (reduce->parsed()) return cmd_reduce(r_model, r_m, r_negate, r_out, r_log);
        if (embed->parsed())
            return cmd_embed(e_model, e_target, e_tries, e_negate, seed, e_out, e_report);
        if (sample->parsed()) return cmd_sample(sa_model, sa_negate, sa_opt, seed, sa_out, sa_report);
        if (solve->parsed())
            return cmd_solve(so_model, so_negate, so_m, so_target, so_embedding, so_chain,
                             so_clone, so_tries, so_opt, seed, so_out, so_report);
        if (stats->parsed()) return cmd_stats(st_samples, st_model, st_negate, st_teff, st_report);
    } catch (const Error& e) {
        json err;
        err["error"] = {{"code", errc_name(e.code())},
                        {"message", e.what()},
                        {"exit_code", errc_exit_code(e.code())}};
        if (e.detail() >= 0) err["error"]["detail"] = e.detail();
        std::cerr << err.dump() << "\n";
        return errc_exit_code(e.code());
    } catch (const std::exception& e) {
        json err;
        err["error"] = {{"code", "internal"}, {"message", e.what()}, {"exit_code", 1}};
        std::cerr << err.dump() << "\n";
        return 1;
    }
    return 2;
}
