#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "tilekmc/energetics.hpp"
#include "tilekmc/lattice.hpp"
#include "tilekmc/rng.hpp"

namespace tilekmc {

enum class TransitionKind : int {
    move_north = 0,
    move_east = 1,
    move_south = 2,
    move_west = 3,
    rotate_cw = 4,
    rotate_ccw = 5,
};

const char* transition_kind_name(TransitionKind k) noexcept;

/// One feasible transition of the current lattice state. Move
/// transitions exist only when the target site is empty; both rotation
/// senses always exist for a placed tile.
struct Transition {
    TransitionKind kind;
    Pos pos;           // the tile the transition acts on
    double activation; // eV
    double rate;       // exp(-activation / TT0)
};

struct SimConfig {
    int lattice_side = 256;
    SpeciesSet species;
    EnergyModel energy;
    double max_coverage = 0.25;
    long steps = 0;
    std::uint64_t seed = 1;
};

enum class EventKind : int {
    deposited = 0,
    move_north,
    move_east,
    move_south,
    move_west,
    rotate_cw,
    rotate_ccw,
    stalled,
};

const char* event_kind_name(EventKind k) noexcept;

struct EventRecord {
    long step = 0;
    EventKind kind = EventKind::stalled;
    Pos pos;                  // deposit site, move origin or rotation site
    double activation = 0.0;  // 0 for depositions and stalls
    int species = 0;          // deposits only
    int orientation = 0;      // deposits only
};

struct RunCounters {
    long depositions = 0;
    long moves = 0;
    long rotations = 0;
    long stalls = 0;
};

/// Fresh enumeration of every feasible transition, tiles in slot order
/// (deposition order), transitions per tile in kind order. This is the
/// reference path the engine's cached rates are equivalence-tested
/// against.
std::vector<Transition> enumerate_transitions(const EnergyModel& model,
                                              const SpeciesSet& species,
                                              const Lattice& lattice);

struct Selection {
    enum class Kind { transition, deposit, stalled } kind;
    std::size_t index = 0; // into the transition list when kind == transition
};

/// Roulette selection per the kMC loop: draw u in [0,1), shoot
/// u * (total + deposition_rate), walk cumulative rates in enumeration
/// order and apply the first transition whose cumulative sum exceeds the
/// shoot; otherwise deposit (or stall when both totals are zero).
Selection roulette_select(std::span<const Transition> transitions, double deposition_rate,
                          RngStream& rng);

/// The stochastic simulation loop. One engine instance runs one
/// simulation; it is strictly single-threaded. Per-tile rates are kept
/// incrementally (only tiles whose neighbourhood changed are
/// recomputed); set_full_recompute(true) switches to recomputing every
/// tile each step, which must be event-for-event identical.
///
/// Draw order per step, fixed for cross-platform determinism:
///   (1) roulette uniform; then on deposition only:
///   (2) empty-site index (row-major), (3) species by concentration
///   weights, (4) orientation uniform in {0..3}.
class Engine {
public:
    explicit Engine(const SimConfig& config);
    Engine(const SimConfig& config, const Lattice& initial);

    void set_full_recompute(bool on) { full_recompute_ = on; }
    void set_observer(std::function<void(const EventRecord&)> observer) {
        observer_ = std::move(observer);
    }

    /// One iteration: refresh rates, select, apply.
    EventRecord step();

    /// Runs config.steps iterations.
    void run();

    const Lattice& lattice() const { return lattice_; }
    const RunCounters& counters() const { return counters_; }
    long current_step() const { return step_; }

    /// Cached transitions in enumeration order (the engine's live view).
    std::vector<Transition> cached_transitions() const;

    /// True when the coverage cap still admits a deposition.
    bool deposition_allowed() const;

private:
    struct SlotRates {
        std::array<double, 6> rate{};
        std::array<double, 6> activation{};
        std::array<bool, 4> movable{};
        double sum = 0.0;
    };

    void refresh_slot(int slot);
    void refresh_all();
    void refresh_around(Pos p, std::vector<int>& dirty) const;
    void apply_dirty(std::vector<int>& dirty);
    EventRecord deposit();
    EventRecord apply_transition(int slot, int entry);

    SimConfig config_;
    Lattice lattice_;
    RngStream rng_;
    std::vector<SlotRates> cache_;
    std::vector<double> sums_; // per-slot rate sums, walked every step
    RunCounters counters_;
    std::function<void(const EventRecord&)> observer_;
    long step_ = 0;
    bool full_recompute_ = false;
};

struct RunResult {
    Lattice lattice;
    RunCounters counters;
};

/// Convenience wrapper: run a fresh simulation to completion.
RunResult run(const SimConfig& config,
              const std::function<void(const EventRecord&)>& observer = nullptr);

/// Writes an event log line per event: step, kind, row, col, activation.
std::string event_log_line(const EventRecord& event);

} // namespace tilekmc
