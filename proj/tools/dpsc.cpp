#include "dps/engine.hpp"
#include "dps/explicit_semantics.hpp"
#include "dps/generators.hpp"
#include "dps/report.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <optional>

using namespace dps;

namespace {

enum Exit : int { kOk = 0, kNegative = 1, kExhausted = 2, kInputError = 3 };

struct RunConfig {
    std::string model_path;
    std::string result_path;
    std::string out_path;
    std::string format = "json";
    bool overapprox = false;
    bool no_fixing = false;
    bool timing = false;
    Refinement refine = Refinement::Off;
    Guidance guidance = Guidance::Rp2;
    std::size_t cap = kDefaultStateCap;
    double budget = 150.0;
    std::optional<std::uint64_t> seed;
    std::size_t steps = 100;

    std::string gen_kind;
    int n = 0;
    int cells = 12;
    std::string arch;
};

/// Writes to --out when given, otherwise to stdout.
void emit(const RunConfig& cfg, const std::string& text)
{
    if (cfg.out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(cfg.out_path);
    if (!out)
        throw std::runtime_error("cannot write " + cfg.out_path);
    out << text;
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int cmd_synthesize(const RunConfig& cfg)
{
    const Model m = load_model(cfg.model_path);
    SynthesisOptions o;
    o.overapprox = cfg.overapprox;
    o.refine = cfg.refine;
    o.guidance = cfg.guidance;
    o.fixing = !cfg.no_fixing;
    o.budget_seconds = cfg.budget;
    o.state_cap = cfg.cap;
    const auto r = synthesize(m, o);
    if (cfg.format == "table")
        emit(cfg, result_table(m, r));
    else
        emit(cfg, result_json(m, r, {.timing = cfg.timing}));
    if (!r.success())
        std::cerr << status_name(r.status) << ": " << r.evidence << "\n";
    switch (r.status) {
    case SynthesisResult::Status::Success:
        return kOk;
    case SynthesisResult::Status::Infeasible:
        return kNegative;
    case SynthesisResult::Status::Exhausted:
        return kExhausted;
    }
    return kExhausted;
}

int cmd_check(const RunConfig& cfg)
{
    const Model m = load_model(cfg.model_path);
    const System closed = m.system.with_priorities(transitive_closure(m.system.priorities));
    const auto v = check_safe(closed, m.risk, cfg.cap);
    emit(cfg, verdict_json(closed, v));
    return v.safe() ? kOk : kNegative;
}

int cmd_validate(const RunConfig& cfg)
{
    const Model m = load_model(cfg.model_path);
    const auto loaded = parse_result(read_file(cfg.result_path), m);
    if (loaded.status != SynthesisResult::Status::Success) {
        std::cerr << "result status is " << status_name(loaded.status) << "; nothing to validate\n";
        return kNegative;
    }
    const auto v = validate_result(loaded.model, loaded.priorities, cfg.cap);
    emit(cfg, validation_json(v));
    for (const auto& f : v.failures)
        std::cerr << "invalid: " << f << "\n";
    return v.ok() ? kOk : kNegative;
}

int cmd_simulate(const RunConfig& cfg)
{
    Model m = load_model(cfg.model_path);
    PrioritySet added;
    if (!cfg.result_path.empty()) {
        auto loaded = parse_result(read_file(cfg.result_path), m);
        m = std::move(loaded.model);
        added = std::move(loaded.priorities);
    }
    PrioritySet all = m.system.priorities;
    all.insert(added.begin(), added.end());
    const System s = m.system.with_priorities(transitive_closure(all));
    const auto t = simulate_distributed(s, m.architecture, m.risk, {.steps = cfg.steps, .seed = cfg.seed});
    emit(cfg, trace_jsonl(s, t));
    switch (t.outcome) {
    case Trace::Outcome::Completed:
        return kOk;
    case Trace::Outcome::Deadlock:
        std::cerr << "simulation reached a deadlock\n";
        return kNegative;
    case Trace::Outcome::Risk:
        std::cerr << "simulation reached a risk configuration\n";
        return kNegative;
    }
    return kNegative;
}

int cmd_gen(const RunConfig& cfg)
{
    Model m;
    if (cfg.gen_kind == "philosophers") {
        m = gen_philosophers(cfg.n, parse_philosopher_arch(cfg.arch.empty() ? "none" : cfg.arch));
    } else if (cfg.gen_kind == "multicore") {
        auto p = parse_multicore_pattern(cfg.arch.empty() ? "broadcast-A" : cfg.arch);
        m = gen_multicore(cfg.n, p.broadcasters, p.local);
    } else {
        m = gen_robots(cfg.n, cfg.cells);
    }
    emit(cfg, emit_model(m));
    return kOk;
}

void add_engine_flags(CLI::App* c, RunConfig& cfg)
{
    const std::map<std::string, Refinement> refine{
        {"off", Refinement::Off}, {"lazy", Refinement::Lazy}, {"eager", Refinement::Eager}};
    const std::map<std::string, Guidance> guidance{
        {"off", Guidance::Off}, {"rp1", Guidance::Rp1}, {"rp2", Guidance::Rp2}};
    c->add_flag("--overapprox", cfg.overapprox, "Retry failed fixes on an over-approximated nested attractor");
    c->add_option("--refine", cfg.refine, "Alphabet refinement: off, lazy or eager")
        ->transform(CLI::CheckedTransformer(refine, CLI::ignore_case));
    c->add_option("--guidance", cfg.guidance, "Branching guidance from unsat cores: off, rp1 or rp2")
        ->transform(CLI::CheckedTransformer(guidance, CLI::ignore_case));
    c->add_flag("--no-fixing", cfg.no_fixing, "Disable diagnosis-based fixing (plain branching)");
    c->add_option("--budget", cfg.budget, "Wall-clock budget in seconds (0 = unlimited)");
    c->add_flag("--timing", cfg.timing, "Include stats.timeMs in the result document");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"dpsc: distributed priority synthesis for component systems"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto* synth = app.add_subcommand("synthesize", "Synthesize deployable priorities for a model");
    synth->add_option("model", cfg.model_path, "Model document (JSON)")->required()->check(CLI::ExistingFile);
    add_engine_flags(synth, cfg);

    auto* check = app.add_subcommand("check", "Explicit safety check of a model under its own priorities");
    check->add_option("model", cfg.model_path, "Model document (JSON)")->required()->check(CLI::ExistingFile);

    auto* validate = app.add_subcommand("validate", "Re-check a synthesis result against its model");
    validate->add_option("model", cfg.model_path, "Model document (JSON)")->required()->check(CLI::ExistingFile);
    validate->add_option("result", cfg.result_path, "Result document (JSON)")->required()->check(CLI::ExistingFile);

    auto* simulate = app.add_subcommand("simulate", "Run the distributed semantics and print a JSON-lines trace");
    simulate->add_option("model", cfg.model_path, "Model document (JSON)")->required()->check(CLI::ExistingFile);
    simulate->add_option("--result", cfg.result_path, "Apply the priorities of a result document")
        ->check(CLI::ExistingFile);
    simulate->add_option("--steps", cfg.steps, "Number of steps")->check(CLI::NonNegativeNumber);
    simulate->add_option("--seed", cfg.seed, "Random arbitration seed (default: first enabled interaction)");

    for (auto* c : {synth, check, validate}) {
        c->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"json", "table"}));
    }
    check->get_option("--format")->check(CLI::IsMember({"json"}));
    validate->get_option("--format")->check(CLI::IsMember({"json"}));
    for (auto* c : {synth, check, validate, simulate})
        c->add_option("--cap", cfg.cap, "Explicit state cap")->check(CLI::PositiveNumber);

    auto* gen = app.add_subcommand("gen", "Generate a benchmark model document");
    gen->add_option("kind", cfg.gen_kind, "philosophers, multicore or robots")
        ->required()
        ->check(CLI::IsMember({"philosophers", "multicore", "robots"}));
    gen->add_option("-n,--size", cfg.n, "Philosophers, processors or robots")->required();
    gen->add_option("--arch", cfg.arch,
                    "philosophers: none|clockwise|counterclockwise|full; multicore: broadcast-A[,B..]|local[-A,..]");
    gen->add_option("--cells", cfg.cells, "Robot grid cells (divisible by 3)");

    for (auto* c : {synth, check, validate, simulate, gen})
        c->add_option("--out", cfg.out_path, "Write output to this file instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kInputError;
    }

    try {
        if (*synth)
            return cmd_synthesize(cfg);
        if (*check)
            return cmd_check(cfg);
        if (*validate)
            return cmd_validate(cfg);
        if (*simulate)
            return cmd_simulate(cfg);
        return cmd_gen(cfg);
    } catch (const ModelError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const CapacityError& e) {
        std::cerr << "error: " << e.what() << " (raise --cap)\n";
        return kExhausted;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    }
}
