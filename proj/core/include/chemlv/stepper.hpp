#ifndef CHEMLV_STEPPER_HPP
#define CHEMLV_STEPPER_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include "chemlv/diagnostics.hpp"
#include "chemlv/elliptic.hpp"
#include "chemlv/grid.hpp"
#include "chemlv/params.hpp"

namespace chemlv {

/// Simulation state. w is always the chemical solve of (u, v).
struct State {
    double t = 0;
    Field u, v, w;
};

enum class IcKind { Constant, PerturbedEquilibrium, RandomPositive, FromFile };

struct InitialCondition {
    IcKind kind = IcKind::PerturbedEquilibrium;
    double u0 = 1.0;         ///< Constant: value for u (v likewise)
    double v0 = 1.0;
    double amplitude = 0.2;  ///< PerturbedEquilibrium: relative amplitude
    double lo = 0.1;         ///< RandomPositive: uniform range
    double hi = 1.0;
    std::string file;        ///< FromFile: snapshot CSV path
};

struct StepperConfig {
    double dt_max = 0.05;
    double cfl_safety = 0.5;      ///< in (0,1)
    double w_floor = 0;           ///< absolute guard; 0 selects the default rule
    double t_end = 10.0;
    int output_stride = 1;        ///< record every this many steps
    double tol_converge = 1e-9;   ///< on linf_u + linf_v
    double blowup_cap = 0;        ///< on max(u+v); 0 selects the default rule
    double t_warmup = -1;         ///< for energy checks; < 0 selects 5/a_min
    std::uint64_t seed = 1;
    InitialCondition ic;
    long checkpoint_step = 0;     ///< emit a mid-run checkpoint at this step (0 = off)
    std::string checkpoint_path;
    bool debug_allow_clipping = false;  ///< fault injection: clip negative densities
};

enum class RunClass { Converged, RunningOutOfTime, WFloorHit, BlowUpSuspected };

std::string to_string(RunClass c);

/// Which degeneration of the system the initial data selects.
enum class RunMode { TwoSpecies, UOnly, VOnly };

std::string to_string(RunMode m);

struct RunResult {
    Trajectory records;
    RunClass classification = RunClass::RunningOutOfTime;
    RunMode mode = RunMode::TwoSpecies;
    State final_state;
    long steps = 0;
    bool has_equilibrium = false;
    Equilibrium eq;   ///< reference equilibrium for the mode, when defined
    double w_floor = 0;
    double blowup_cap = 0;
    double eps_hat = 0;          ///< filled by callers that run verify_inequalities
    std::string error_detail;    ///< message for WFloorHit / error classifications
};

/// One time step of the split scheme, shared by both species:
/// explicit upwind chemotactic advection, implicit diffusion through the
/// (1/dt I - Lap) solve, positivity-preserving semi-implicit reaction
/// u <- u (1 + dt a1) / (1 + dt (b1 u + c1 v)), then the chemical re-solve.
class Stepper {
  public:
    Stepper(const ModelParams& params, const Grid& grid, const StepperConfig& cfg);

    /// Face velocity chi * (face gradient of w) / (face-averaged w).
    /// Face increments below a few ulps of w are treated as flat so elliptic
    /// rounding noise cannot advect. Throws WFloorViolation when
    /// min w < w_floor.
    FaceField chemotactic_velocity(const Field& w, double chi) const;

    /// dt = min(dt_max, advective CFL bound, cfl_safety / a_max).
    double cfl_dt(const State& s) const;

    State step(const State& s, double dt) const;

    /// Initial state from fields (validates sign and combined mass, solves w).
    State make_state(double t, const Field& u, const Field& v) const;

    double w_floor() const { return w_floor_; }
    const ModelParams& params() const { return params_; }
    const Grid& grid() const { return grid_; }

  private:
    Field diffuse(const Field& f, double dt) const;

    ModelParams params_;
    Grid grid_;
    StepperConfig cfg_;
    double w_floor_;
    HelmholtzSolver chem_solver_;
    // Diffusion solver cache, keyed by dt (rebuilt when dt changes).
    mutable std::shared_ptr<const HelmholtzSolver> diff_solver_;
    mutable double diff_dt_ = -1.0;
};

/// Builds initial data per config (seeded, reproducible), integrates to
/// t_end / convergence / an error state, recording diagnostics every
/// output_stride steps plus the final state.
RunResult run(const ModelParams& params, const Grid& grid, const StepperConfig& cfg);

/// Continues a run from a mid-trajectory state (checkpoint resume). The
/// stride phase is carried by `step_offset` so records align with the
/// original run.
RunResult run_from_state(const ModelParams& params, const Grid& grid,
                         const StepperConfig& cfg, const State& start,
                         long step_offset);

/// Builds the (u, v) initial fields for a config without running.
std::pair<Field, Field> build_initial_fields(const ModelParams& params,
                                             const Grid& grid,
                                             const StepperConfig& cfg);

}  // namespace chemlv

#endif
