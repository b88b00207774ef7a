// kgs_cli: run, energy, convergence and bench front end.
//
// Exit codes: 0 ok, 2 configuration error, 3 runtime or numerical error,
// 4 I/O error.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "kgs/config.hpp"
#include "kgs/harness.hpp"

namespace {

enum ExitCode { kOk = 0, kConfig = 2, kRuntime = 3, kIo = 4 };

struct Flags {
    std::optional<std::string> config;
    kgs::ConfigValues overrides;
};

void add_common_flags(CLI::App* cmd, Flags& flags)
{
    cmd->add_option_function<std::string>("--config", [&](const std::string& p) { flags.config = p; },
                                          "Config file (key = value lines)");
    const std::pair<const char*, const char*> mapped[] = {
        {"--tau", "tau"},           {"--grid-n", "N"},          {"--dim", "dimension"},
        {"--scenario", "scenario"}, {"--strategy", "strategy"}, {"--seed", "seed"},
        {"--executor", "executor"}, {"--workers", "workers"},   {"--out", "output_dir"},
        {"--snapshot-stride", "snapshot_stride"},                {"--record-stride", "record_stride"},
    };
    for (const auto& [flag, key] : mapped) {
        const std::string k = key;
        cmd->add_option_function<std::string>(flag, [&flags, k](const std::string& v) { flags.overrides[k] = v; },
                                              "Overrides config key '" + k + "'");
    }
}

void prepare_output(const std::filesystem::path& dir)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir))
        throw kgs::IoError("cannot create output directory: " + dir.string());
}

void print_trace_summary(const kgs::EnergyTrace& tr, const std::string& label)
{
    std::printf("%s: %zu records, max %s energy error %.3e, max relative mass drift %.3e\n", label.c_str(),
                tr.records.size(), tr.absolute_error ? "absolute" : "relative", tr.max_error(),
                kgs::max_mass_drift(tr));
}

int cmd_run(const kgs::RunConfig& c)
{
    const std::filesystem::path out(c.output_dir);
    prepare_output(out);
    kgs::FieldState state = kgs::make_initial_state(c.scenario, c.grid(), c.seed, c.amplitude);
    const kgs::EnergyTrace tr = kgs::integrate(state, c);
    kgs::write_trace_csv(tr, out / "trace.csv");
    print_trace_summary(tr, "run");
    std::printf("wrote %s\n", (out / "trace.csv").string().c_str());
    return kOk;
}

int cmd_energy(const kgs::RunConfig& c)
{
    const std::filesystem::path out(c.output_dir);
    prepare_output(out);
    const auto traces = kgs::run_energy_experiment(c);
    for (std::size_t k = 0; k < traces.size(); ++k) {
        const std::string name = c.orders == 0 ? "energy.csv" : "energy_seed" + std::to_string(c.seed + k) + ".csv";
        kgs::write_trace_csv(traces[k], out / name);
        print_trace_summary(traces[k], name);
    }
    return kOk;
}

int cmd_convergence(const kgs::RunConfig& c)
{
    const std::filesystem::path out(c.output_dir);
    prepare_output(out);
    const kgs::ConvergenceReport rep = kgs::run_convergence(c, c.levels);
    kgs::write_convergence_csv(rep, out / "convergence.csv");
    std::printf("%5s %8s %10s %12s %12s %12s %12s\n", "level", "N", "tau", "self_u", "self_psi", "ref_u", "ref_psi");
    for (const auto& r : rep.rows)
        std::printf("%5zu %8zu %10.3e %12.4e %12.4e %12.4e %12.4e\n", r.level, r.n, r.tau, r.self.u, r.self.psi,
                    r.reference.u, r.reference.psi);
    for (std::size_t k = 1; k < rep.rows.size(); ++k) {
        std::printf("order %zu->%zu: self u %.4f psi %.4f", k - 1, k, rep.self_order_u(k), rep.self_order_psi(k));
        if (rep.has_reference)
            std::printf(", reference u %.4f psi %.4f", rep.ref_order_u(k), rep.ref_order_psi(k));
        std::printf("\n");
    }
    if (rep.has_reference)
        std::printf("RK4 reference tau %.3e, energy drift %.3e\n", rep.reference_tau, rep.reference_drift);
    return kOk;
}

int cmd_bench(const kgs::RunConfig& c)
{
    const std::filesystem::path out(c.output_dir);
    prepare_output(out);
    const std::vector<std::size_t> ns = c.bench_n.empty() ? std::vector<std::size_t>{c.n} : c.bench_n;
    const std::vector<std::size_t> ws =
        c.bench_workers.empty() ? std::vector<std::size_t>{c.workers} : c.bench_workers;
    const kgs::BenchReport rep = kgs::run_bench(c, ns, ws, c.repetitions);
    kgs::write_bench_csv(rep, out / "bench.csv");
    kgs::write_scaling_csv(rep, out / "bench_scaling.csv");
    std::printf("host cores: %d\n", kgs::available_cores());
    for (const auto& r : rep.rows)
        std::printf("N=%zu workers=%zu %s/%s: %.6e s/step, speedup %.2f\n", r.n, r.workers,
                    std::string(kgs::to_string(r.strategy)).c_str(), std::string(kgs::to_string(r.executor)).c_str(),
                    r.seconds_per_step, r.speedup);
    for (const auto& s : rep.scaling)
        std::printf("N %zu -> %zu (workers=%zu): time ratio %.2f\n", s.n_from, s.n_to, s.workers, s.ratio);
    return kOk;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Klein-Gordon-Schroedinger DP-AVF2 solver"};
    app.require_subcommand(1);
    Flags flags;
    struct Command {
        const char* name;
        const char* help;
        int (*fn)(const kgs::RunConfig&);
    };
    const Command commands[] = {
        {"run", "Integrate and write an energy trace plus optional snapshots", cmd_run},
        {"energy", "Energy experiment, optionally over several seeded random orders", cmd_energy},
        {"convergence", "Convergence study under simultaneous h and tau halving", cmd_convergence},
        {"bench", "Wall-clock timing over N and worker lists", cmd_bench},
    };
    for (const auto& cmd : commands)
        add_common_flags(app.add_subcommand(cmd.name, cmd.help), flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kConfig;
    }

    const CLI::App* chosen = app.get_subcommands().front();
    const std::string name = chosen->get_name();
    try {
        const kgs::ParsedConfig parsed = kgs::parse_config(flags.config, flags.overrides);
        for (const auto& key : kgs::irrelevant_keys(name, parsed.given))
            std::cerr << "warning: key '" << key << "' is ignored by '" << name << "'\n";
        for (const auto& cmd : commands)
            if (name == cmd.name)
                return cmd.fn(parsed.config);
    } catch (const kgs::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kConfig;
    } catch (const kgs::ScheduleError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kConfig;
    } catch (const kgs::IoError& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return kIo;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << '\n';
        return kRuntime;
    }
    return kRuntime;
}
