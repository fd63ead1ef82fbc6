#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "fsi/diagnostics.hpp"

namespace fsi {

/// Pinned ledger CSV column order; every writer and reader in the project
/// goes through these two calls, so the bytes are stable across runs.
extern const char* const kLedgerHeader;

void write_ledger_header(std::ostream& out);

/// One CSV row, flushed immediately so an interrupted run leaves a prefix of
/// the full ledger on disk.
void write_ledger_row(std::ostream& out, const StepRecord& rec);

/// Read a ledger back (header plus rows). The pass verdicts are not part of
/// the serialized row and come back unset.
std::vector<StepRecord> read_ledger(std::istream& in);

/// Self-describing structured-grid text snapshot of a state: header with
/// dims, spacing, time and the field table, then per-field row-major node
/// values (x fastest, then y, then z; one node per line).
void write_snapshot(std::ostream& out, const FsiState& state);

struct Snapshot {
    int nx = 0, ny = 0, nz = 0;
    double hx = 0, hy = 0, hz = 0;
    double time = 0;
    // Field name -> node-interleaved values (size ncomp * nx*ny*nz).
    std::map<std::string, std::vector<double>> fields;
    std::map<std::string, int> ncomp;
};

Snapshot read_snapshot(std::istream& in);

/// Full trajectory round trip (run parameters, ledger, stored fields) with
/// round-trip double precision; the `diagnose` command rebuilds its reports
/// from exactly what `run` stored.
void write_trajectory(std::ostream& out, const Trajectory& traj);
Trajectory read_trajectory(std::istream& in);

/// Diagnostics summary: human-readable block followed by CSV sections for
/// the Nikolskii quotients and the spatial monitor series.
void write_report(std::ostream& out, const RegularityReport& rep);

}  // namespace fsi
