// search.hpp: parameter-space exploration of the state family.
//
//   scan_slice        classify a {q1, q2} slice at fixed q3 (qutrits)
//   optimize_witness  minimize 2 - I_{d+1} over physical PPT family members
//   horodecki_sweep   min PT eigenvalue and witness along the Horodecki line

#pragma once

#include "boundsim/simplex.hpp"
#include "boundsim/witness.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace boundsim {

/// PPT is claimed when the smallest partial-transpose eigenvalue is at
/// least -kPptTol.
inline constexpr double kPptTol = 1e-9;

/// Entanglement is certified when the witness is below -kWitnessTol.
inline constexpr double kWitnessTol = 1e-9;

struct SliceSpec {
    double q3 = -0.5776;
    double q1_lo = -1.0;
    double q1_hi = 1.0;
    double q2_lo = -2.5;
    double q2_hi = -0.5;
    int res_q1 = 200;
    int res_q2 = 200;

    void validate() const;  // InvalidConfig
    double q1_at(int i) const { return q1_lo + (q1_hi - q1_lo) * i / (res_q1 - 1); }
    double q2_at(int j) const { return q2_lo + (q2_hi - q2_lo) * j / (res_q2 - 1); }
};

enum class CellClass { Unphysical = 0, SeparableOrUndetected = 1, FreeEntangled = 2, BoundEntangled = 3 };

std::string to_string(CellClass c);

struct GridCell {
    double q1 = 0.0;
    double q2 = 0.0;
    bool physical = false;
    bool ppt = false;
    double witness = 0.0;
    double min_pt_eig = 0.0;
    CellClass cls = CellClass::Unphysical;
};

/// Cells in row-major order: index j * res_q1 + i holds (q1_at(i), q2_at(j)).
struct ClassifiedGrid {
    SliceSpec spec;
    std::vector<GridCell> cells;

    const GridCell& at(int i, int j) const { return cells[static_cast<std::size_t>(j * spec.res_q1 + i)]; }
    std::size_t count(CellClass c) const;
};

struct ScanOptions {
    LabelingChoice labeling = LabelingChoice::methods();
    int threads = 1;
    double psd_tol = kPsdTol;
    double ppt_tol = kPptTol;
};

ClassifiedGrid scan_slice(const SliceSpec& spec, const ScanOptions& options = {});

struct OptimizationBudget {
    int grid_points = 0;      // per parameter axis; 0 picks 11 (d = 3) or 7 (d > 3)
    int restarts = 20;        // best grid cells refined
    int random_restarts = 4;  // extra seeded feasible starts
    int relabel_rounds = 8;   // max labeling updates per start (max mode)
    int threads = 1;
    std::uint64_t seed = 0;
};

struct TraceEntry {
    int start = 0;
    int round = 0;
    double witness = 0.0;
};

struct OptimizationResult {
    int d = 0;
    FamilyParams best;
    double witness = 0.0;
    double min_pt_eig = 0.0;
    double min_coeff = 0.0;
    long evaluations = 0;
    std::vector<TraceEntry> trace;
    Labeling labeling;
};

/// d in {3,4,5,7,8,9}. Coarse grid over the family's parameter box, then
/// interior-point refinement from the best cells: for a fixed relabeling
/// the witness is linear in q and the feasible set {c >= 0, rho^T_A >= 0}
/// is convex, so each refinement solves that convex program with a
/// log-barrier Newton method; in max mode the relabeling is then updated
/// at the new point and the solve repeated until it stops changing.
OptimizationResult optimize_witness(int d, const LabelingChoice& labeling, const OptimizationBudget& budget = {});

struct HorodeckiRow {
    double lambda = 0.0;
    double min_pt_eig = 0.0;
    double witness = 0.0;
    bool ppt = false;
    bool bound_entangled = false;  // ppt && witness < -kWitnessTol
};

std::vector<HorodeckiRow> horodecki_sweep(double lambda_lo, double lambda_hi, double step,
                                          const LabelingChoice& labeling = LabelingChoice::maximize());

}  // namespace boundsim
