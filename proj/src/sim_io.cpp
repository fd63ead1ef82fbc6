#include "fsi/sim_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace fsi {

const char* const kLedgerHeader =
    "step,t,E_n,E_half,E_next,D_n,C_n,min_jacobian,eta_h2delta,"
    "struct_ineq_slack,fluid_ineq_slack,solver_iters,solver_residual";

namespace {

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

double parse_double(const std::string& tok, const char* what) {
    const char* c = tok.c_str();
    char* end = nullptr;
    const double x = std::strtod(c, &end);
    if (end == c || *end != '\0')
        throw std::runtime_error(std::string(what) + ": bad numeric token '" + tok +
                                 "'");
    return x;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

void write_ledger_header(std::ostream& out) { out << kLedgerHeader << "\n" << std::flush; }

void write_ledger_row(std::ostream& out, const StepRecord& r) {
    out << r.step << ',' << fmt(r.t) << ',' << fmt(r.e_n) << ',' << fmt(r.e_half)
        << ',' << fmt(r.e_next) << ',' << fmt(r.d_n) << ',' << fmt(r.c_n) << ','
        << fmt(r.min_jacobian) << ',' << fmt(r.eta_h2delta) << ','
        << fmt(r.struct_slack) << ',' << fmt(r.fluid_slack) << ',' << r.solver_iters
        << ',' << fmt(r.solver_residual) << "\n"
        << std::flush;
}

std::vector<StepRecord> read_ledger(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kLedgerHeader)
        throw std::runtime_error("read_ledger: missing or unexpected header");
    std::vector<StepRecord> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const std::vector<std::string> tok = split_csv(line);
        if (tok.size() != 13)
            throw std::runtime_error("read_ledger: expected 13 columns, got " +
                                     std::to_string(tok.size()));
        StepRecord r;
        r.step = static_cast<int>(parse_double(tok[0], "read_ledger"));
        r.t = parse_double(tok[1], "read_ledger");
        r.e_n = parse_double(tok[2], "read_ledger");
        r.e_half = parse_double(tok[3], "read_ledger");
        r.e_next = parse_double(tok[4], "read_ledger");
        r.d_n = parse_double(tok[5], "read_ledger");
        r.c_n = parse_double(tok[6], "read_ledger");
        r.min_jacobian = parse_double(tok[7], "read_ledger");
        r.eta_h2delta = parse_double(tok[8], "read_ledger");
        r.struct_slack = parse_double(tok[9], "read_ledger");
        r.fluid_slack = parse_double(tok[10], "read_ledger");
        r.solver_iters = static_cast<int>(parse_double(tok[11], "read_ledger"));
        r.solver_residual = parse_double(tok[12], "read_ledger");
        rows.push_back(r);
    }
    return rows;
}

namespace {

void write_field_block(std::ostream& out, const char* name, const ChannelField& f) {
    const Grid3d& g = f.grid;
    out << "field " << name << ' ' << f.ncomp << "\n";
    for (int j = 0; j < g.nz; ++j)
        for (int iy = 0; iy < g.ny(); ++iy)
            for (int ix = 0; ix < g.nx(); ++ix) {
                for (int c = 0; c < f.ncomp; ++c) {
                    if (c) out << ' ';
                    out << fmt(f.at(c, j, iy, ix));
                }
                out << "\n";
            }
}

}  // namespace

void write_snapshot(std::ostream& out, const FsiState& state) {
    const Grid3d& g = state.u.grid;
    out << "fsi-snapshot 1\n";
    out << "dims " << g.nx() << ' ' << g.ny() << ' ' << g.nz << "\n";
    out << "spacing " << fmt(g.horiz.hx()) << ' ' << fmt(g.horiz.hy()) << ' '
        << fmt(g.hz()) << "\n";
    out << "time " << fmt(state.t) << "\n";
    out << "fields u:3 p:1 J:1 A:3\n";
    write_field_block(out, "u", state.u);
    write_field_block(out, "p", state.p);
    write_field_block(out, "J", state.map.jac);
    write_field_block(out, "A", state.map.a);
    out << std::flush;
}

Snapshot read_snapshot(std::istream& in) {
    Snapshot snap;
    std::string word;
    int version = 0;
    in >> word >> version;
    if (!in || word != "fsi-snapshot")
        throw std::runtime_error("read_snapshot: not a snapshot stream");
    in >> word >> snap.nx >> snap.ny >> snap.nz;
    if (!in || word != "dims") throw std::runtime_error("read_snapshot: missing dims");
    in >> word >> snap.hx >> snap.hy >> snap.hz;
    if (!in || word != "spacing")
        throw std::runtime_error("read_snapshot: missing spacing");
    in >> word >> snap.time;
    if (!in || word != "time") throw std::runtime_error("read_snapshot: missing time");
    std::string fields_line;
    in >> word;
    std::getline(in, fields_line);  // the field table; blocks are authoritative
    if (word != "fields") throw std::runtime_error("read_snapshot: missing field table");

    const size_t nodes =
        static_cast<size_t>(snap.nx) * snap.ny * static_cast<size_t>(snap.nz);
    while (in >> word) {
        if (word != "field")
            throw std::runtime_error("read_snapshot: expected a field block");
        std::string name;
        int nc = 0;
        in >> name >> nc;
        if (!in || nc < 1) throw std::runtime_error("read_snapshot: bad field header");
        std::vector<double> vals(nodes * nc);
        for (double& v : vals) in >> v;
        if (!in) throw std::runtime_error("read_snapshot: truncated field " + name);
        snap.fields[name] = std::move(vals);
        snap.ncomp[name] = nc;
    }
    return snap;
}

namespace {

void write_values(std::ostream& out, const std::vector<double>& v) {
    for (size_t i = 0; i < v.size(); ++i)
        out << fmt(v[i]) << ((i + 1) % 8 == 0 || i + 1 == v.size() ? '\n' : ' ');
}

void read_values(std::istream& in, std::vector<double>& v, const char* what) {
    for (double& x : v) in >> x;
    if (!in) throw std::runtime_error(std::string("read_trajectory: truncated ") + what);
}

}  // namespace

void write_trajectory(std::ostream& out, const Trajectory& traj) {
    const DriverParams& d = traj.params;
    out << "fsi-trajectory 1\n";
    out << d.nx << ' ' << d.ny << ' ' << d.nz << ' ' << d.num_steps << ' '
        << fmt(d.t_final) << ' ' << fmt(d.nu) << ' ' << fmt(d.gamma) << ' '
        << fmt(d.s) << ' ' << fmt(d.alpha) << ' ' << fmt(d.delta) << ' '
        << fmt(d.rel_tol) << ' ' << d.max_iter << ' ' << (d.project_initial ? 1 : 0)
        << "\n";
    const int m = traj.steps();
    out << "completed " << m << "\n";
    out << "ledger\n";
    for (const StepRecord& r : traj.ledger) {
        out << r.step << ' ' << fmt(r.t) << ' ' << fmt(r.e_n) << ' ' << fmt(r.e_half)
            << ' ' << fmt(r.e_next) << ' ' << fmt(r.d_n) << ' ' << fmt(r.c_n) << ' '
            << fmt(r.min_jacobian) << ' ' << fmt(r.eta_h2delta) << ' '
            << fmt(r.struct_slack) << ' ' << fmt(r.fluid_slack) << ' '
            << r.solver_iters << ' ' << fmt(r.solver_residual) << ' '
            << (r.struct_pass ? 1 : 0) << ' ' << (r.fluid_pass ? 1 : 0) << "\n";
    }
    out << "eta " << traj.eta.size() << "\n";
    for (const TorusField& f : traj.eta) write_values(out, f.data);
    out << "v " << traj.v.size() << "\n";
    for (const TorusField& f : traj.v) write_values(out, f.data);
    out << "v_half " << traj.v_half.size() << "\n";
    for (const TorusField& f : traj.v_half) write_values(out, f.data);
    out << "u " << traj.u.size() << "\n";
    for (const ChannelField& f : traj.u) write_values(out, f.data);
    out << std::flush;
}

Trajectory read_trajectory(std::istream& in) {
    std::string word;
    int version = 0;
    in >> word >> version;
    if (!in || word != "fsi-trajectory")
        throw std::runtime_error("read_trajectory: not a trajectory stream");

    Trajectory traj;
    DriverParams d;
    int proj = 1;
    in >> d.nx >> d.ny >> d.nz >> d.num_steps >> d.t_final >> d.nu >> d.gamma >>
        d.s >> d.alpha >> d.delta >> d.rel_tol >> d.max_iter >> proj;
    if (!in) throw std::runtime_error("read_trajectory: bad parameter line");
    d.project_initial = proj != 0;
    traj.params = d;
    traj.grid = Grid3d(d.nx, d.ny, d.nz);

    int m = 0;
    in >> word >> m;
    if (!in || word != "completed" || m < 0)
        throw std::runtime_error("read_trajectory: bad step count");
    in >> word;
    if (word != "ledger") throw std::runtime_error("read_trajectory: missing ledger");
    for (int i = 0; i < m; ++i) {
        StepRecord r;
        int sp = 0, fp = 0;
        in >> r.step >> r.t >> r.e_n >> r.e_half >> r.e_next >> r.d_n >> r.c_n >>
            r.min_jacobian >> r.eta_h2delta >> r.struct_slack >> r.fluid_slack >>
            r.solver_iters >> r.solver_residual >> sp >> fp;
        if (!in) throw std::runtime_error("read_trajectory: truncated ledger");
        r.struct_pass = sp != 0;
        r.fluid_pass = fp != 0;
        traj.ledger.push_back(r);
    }

    const auto read_torus_series = [&](const char* name, size_t expect,
                                       std::vector<TorusField>& dst) {
        size_t count = 0;
        in >> word >> count;
        if (!in || word != name || count != expect)
            throw std::runtime_error(std::string("read_trajectory: bad ") + name +
                                     " block");
        for (size_t i = 0; i < count; ++i) {
            TorusField f(traj.grid.horiz, 3);
            read_values(in, f.data, name);
            dst.push_back(std::move(f));
        }
    };
    read_torus_series("eta", static_cast<size_t>(m) + 1, traj.eta);
    read_torus_series("v", static_cast<size_t>(m) + 1, traj.v);
    read_torus_series("v_half", static_cast<size_t>(m), traj.v_half);

    size_t count = 0;
    in >> word >> count;
    if (!in || word != "u" || count != static_cast<size_t>(m) + 1)
        throw std::runtime_error("read_trajectory: bad u block");
    for (size_t i = 0; i < count; ++i) {
        ChannelField f(traj.grid, 3);
        read_values(in, f.data, "u");
        traj.u.push_back(std::move(f));
    }
    return traj;
}

void write_report(std::ostream& out, const RegularityReport& rep) {
    const SpatialRegularityReport& sp = rep.spatial;
    const DissipationBudget& b = rep.budget;
    out << "regularity report\n";
    out << "delta = " << fmt(sp.delta) << "\n";
    out << "s = " << fmt(sp.s) << "\n";
    out << "sup_h2delta = " << fmt(sp.sup_value) << " (attained at step "
        << sp.sup_step << ")\n";
    out << "l2_high_norm = " << fmt(sp.l2_high) << "\n";
    out << "finite = " << (sp.finite ? "yes" : "no") << "\n";
    out << "budget: E0 = " << fmt(b.e0) << ", sum_D = " << fmt(b.d_sum)
        << ", sum_C = " << fmt(b.c_sum) << ", E_final = " << fmt(b.e_final)
        << ", certified = " << (b.certified ? "yes" : "no") << "\n";
    out << "\nnikolskii\n";
    out << "lag,quotient_v,quotient_u\n";
    for (size_t i = 0; i < rep.lags.size(); ++i)
        out << fmt(rep.lags[i]) << ',' << fmt(rep.nikolskii_v[i]) << ','
            << fmt(rep.nikolskii_u[i]) << "\n";
    out << "\nspatial series\n";
    out << "step,h2delta,running_sup\n";
    for (size_t n = 0; n < sp.h2delta.size(); ++n)
        out << n << ',' << fmt(sp.h2delta[n]) << ',' << fmt(sp.running_sup[n]) << "\n";
    out << std::flush;
}

}  // namespace fsi
