#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "fsi/sim_config.hpp"
#include "fsi/sim_io.hpp"

namespace fs = std::filesystem;
using namespace fsi;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void print_violations(const std::vector<ConfigViolation>& bad) {
    for (const ConfigViolation& v : bad) {
        if (v.line > 0)
            std::cerr << "config error (line " << v.line << "): " << v.message << "\n";
        else
            std::cerr << "config error: " << v.message << "\n";
    }
}

int cmd_check(const std::string& path, bool quiet) {
    const ConfigParseResult res = parse_config(read_file(path));
    if (!res.ok()) {
        print_violations(res.violations);
        return 1;
    }
    if (!quiet) std::cout << "ok\n";
    return 0;
}

std::string snapshot_name(int step) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "snapshot_%06d.txt", step);
    return buf;
}

int cmd_run(const std::string& path, bool quiet, int stride_override) {
    const ConfigParseResult res = parse_config(read_file(path));
    if (!res.ok()) {
        print_violations(res.violations);
        return 1;
    }
    SimConfig cfg = res.config;
    if (stride_override >= 0) cfg.snapshot_stride = stride_override;

    const fs::path out_dir(cfg.output_dir);
    fs::create_directories(out_dir);
    {
        std::ofstream cf(out_dir / "config.txt");
        cf << serialize_config(cfg);
        if (!cf) throw std::runtime_error("cannot write config.txt");
    }

    std::ofstream ledger(out_dir / "ledger.csv");
    if (!ledger) throw std::runtime_error("cannot open ledger.csv for writing");
    write_ledger_header(ledger);

    const InitialData init = build_initial_data(cfg);
    const StepObserver observer = [&](const StepRecord& rec, const FsiState& state) {
        write_ledger_row(ledger, rec);
        if (!ledger)
            throw std::runtime_error("ledger write failed at step " +
                                     std::to_string(rec.step));
        if (cfg.snapshot_stride > 0 && rec.step % cfg.snapshot_stride == 0) {
            std::ofstream snap(out_dir / snapshot_name(rec.step));
            write_snapshot(snap, state);
            if (!snap)
                throw std::runtime_error("snapshot write failed at step " +
                                         std::to_string(rec.step));
        }
        if (!quiet)
            std::cout << "step " << rec.step << "/" << cfg.driver.num_steps
                      << "  t = " << rec.t << "  E = " << rec.e_next
                      << "  iters = " << rec.solver_iters << "\n";
    };

    const RunResult run = run_splitting(cfg.driver, init, observer);

    {
        std::ofstream tf(out_dir / "trajectory.txt");
        write_trajectory(tf, run.trajectory);
        if (!tf) throw std::runtime_error("cannot write trajectory.txt");
    }
    {
        const RegularityReport rep =
            diagnose_trajectory(run.trajectory, cfg.driver.delta);
        std::ofstream rf(out_dir / "report.txt");
        write_report(rf, rep);
        if (!rf) throw std::runtime_error("cannot write report.txt");
    }

    if (run.contact.contact) {
        // The halt certificate goes to standard output even in quiet mode.
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.17g", run.t_max);
        std::cout << "contact halt\n";
        std::cout << "T_max = " << buf << "\n";
        std::cout << "failed_step = " << run.contact.failed_step << "\n";
        std::snprintf(buf, sizeof(buf), "%.17g", run.contact.min_jacobian);
        std::cout << "min_jacobian = " << buf << "\n";
        std::snprintf(buf, sizeof(buf), "%.17g", run.alpha);
        std::cout << "alpha = " << buf << "\n";
        return 2;
    }
    if (!quiet)
        std::cout << "completed " << run.trajectory.steps() << " steps, t_final = "
                  << run.t_max << "\n";
    return 0;
}

int cmd_diagnose(const std::string& dir, bool quiet) {
    std::ifstream tf(fs::path(dir) / "trajectory.txt");
    if (!tf) throw std::runtime_error("cannot open trajectory.txt in '" + dir + "'");
    const Trajectory traj = read_trajectory(tf);
    const RegularityReport rep = diagnose_trajectory(traj, traj.params.delta);
    std::ofstream rf(fs::path(dir) / "report.txt");
    write_report(rf, rep);
    if (!rf) throw std::runtime_error("cannot write report.txt");
    if (!quiet) write_report(std::cout, rep);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"operator-splitting FSI channel solver"};
    app.require_subcommand(1);
    bool quiet = false;
    app.add_flag("--quiet", quiet, "suppress progress output");

    std::string config_path;
    std::string out_dir;
    int stride_override = -1;

    CLI::App* run = app.add_subcommand("run", "run a configured simulation");
    run->fallthrough();
    run->add_option("config", config_path, "configuration file")->required();
    run->add_option("--snapshot-stride", stride_override,
                    "override the configured snapshot stride");

    CLI::App* check = app.add_subcommand("check", "validate a configuration file");
    check->fallthrough();
    check->add_option("config", config_path, "configuration file")->required();

    CLI::App* diagnose =
        app.add_subcommand("diagnose", "recompute reports from a stored run");
    diagnose->fallthrough();
    diagnose->add_option("output_dir", out_dir, "directory of a completed run")
        ->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(config_path, quiet, stride_override);
        if (check->parsed()) return cmd_check(config_path, quiet);
        return cmd_diagnose(out_dir, quiet);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
