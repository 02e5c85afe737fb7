#include "tilekmc/engine.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace tilekmc {

const char* transition_kind_name(TransitionKind k) noexcept {
    switch (k) {
        case TransitionKind::move_north: return "move_north";
        case TransitionKind::move_east: return "move_east";
        case TransitionKind::move_south: return "move_south";
        case TransitionKind::move_west: return "move_west";
        case TransitionKind::rotate_cw: return "rotate_cw";
        case TransitionKind::rotate_ccw: return "rotate_ccw";
    }
    return "?";
}

const char* event_kind_name(EventKind k) noexcept {
    switch (k) {
        case EventKind::deposited: return "deposited";
        case EventKind::move_north: return "move_north";
        case EventKind::move_east: return "move_east";
        case EventKind::move_south: return "move_south";
        case EventKind::move_west: return "move_west";
        case EventKind::rotate_cw: return "rotate_cw";
        case EventKind::rotate_ccw: return "rotate_ccw";
        case EventKind::stalled: return "stalled";
    }
    return "?";
}

std::vector<Transition> enumerate_transitions(const EnergyModel& model,
                                              const SpeciesSet& species,
                                              const Lattice& lattice) {
    std::vector<Transition> out;
    for (int slot = 0; slot < lattice.slot_count(); ++slot) {
        const TileInstance* tile = lattice.slot(slot);
        if (!tile) continue;
        for (int k = 0; k < 4; ++k) {
            const Direction d = static_cast<Direction>(k);
            if (lattice.occupied(lattice.neighbor(tile->pos, d))) continue;
            const double act = activation_motion(model, species, lattice, tile->pos, d);
            out.push_back({static_cast<TransitionKind>(k), tile->pos, act, model.rate(act)});
        }
        const double cw = activation_rotation(model, species, lattice, tile->pos, +1);
        out.push_back({TransitionKind::rotate_cw, tile->pos, cw, model.rate(cw)});
        const double ccw = activation_rotation(model, species, lattice, tile->pos, -1);
        out.push_back({TransitionKind::rotate_ccw, tile->pos, ccw, model.rate(ccw)});
    }
    return out;
}

Selection roulette_select(std::span<const Transition> transitions, double deposition_rate,
                          RngStream& rng) {
    double total = 0.0;
    for (const Transition& t : transitions) total += t.rate;

    if (total == 0.0 && deposition_rate == 0.0) return {Selection::Kind::stalled, 0};

    const double shoot = rng.uniform01() * (total + deposition_rate);
    double counter = 0.0;
    for (std::size_t i = 0; i < transitions.size(); ++i) {
        counter += transitions[i].rate;
        if (counter > shoot) return {Selection::Kind::transition, i};
    }
    if (deposition_rate > 0.0) return {Selection::Kind::deposit, 0};
    // Rounding pushed the shoot to the very end of a deposition-free
    // roulette; fall back to the last transition.
    return {Selection::Kind::transition, transitions.size() - 1};
}

Engine::Engine(const SimConfig& config)
    : config_(config), lattice_(config.lattice_side), rng_(config.seed) {
    if (config_.lattice_side < 2) raise(Errc::bad_config, "lattice side must be >= 2");
    if (config_.max_coverage <= 0.0 || config_.max_coverage > 1.0)
        raise(Errc::bad_config, "max_coverage must be in (0,1]");
    if (config_.steps < 0) raise(Errc::bad_config, "steps must be >= 0");
}

Engine::Engine(const SimConfig& config, const Lattice& initial) : Engine(config) {
    if (initial.side() != config.lattice_side)
        raise(Errc::bad_config, "initial lattice side does not match config");
    lattice_ = initial;
    cache_.clear();
    sums_.clear();
    refresh_all();
}

void Engine::refresh_slot(int slot) {
    if (slot >= static_cast<int>(cache_.size())) {
        cache_.resize(static_cast<std::size_t>(slot) + 1);
        sums_.resize(static_cast<std::size_t>(slot) + 1, 0.0);
    }
    SlotRates& r = cache_[static_cast<std::size_t>(slot)];
    const TileInstance* tile = lattice_.slot(slot);
    if (!tile) {
        r = SlotRates{};
        sums_[static_cast<std::size_t>(slot)] = 0.0;
        return;
    }

    double sum = 0.0;
    for (int k = 0; k < 4; ++k) {
        const std::size_t i = static_cast<std::size_t>(k);
        const Direction d = static_cast<Direction>(k);
        if (lattice_.occupied(lattice_.neighbor(tile->pos, d))) {
            r.movable[i] = false;
            r.rate[i] = 0.0;
            r.activation[i] = 0.0;
        } else {
            r.movable[i] = true;
            r.activation[i] =
                activation_motion(config_.energy, config_.species, lattice_, tile->pos, d);
            r.rate[i] = config_.energy.rate(r.activation[i]);
            sum += r.rate[i];
        }
    }
    r.activation[4] = activation_rotation(config_.energy, config_.species, lattice_, tile->pos, +1);
    r.rate[4] = config_.energy.rate(r.activation[4]);
    sum += r.rate[4];
    r.activation[5] = activation_rotation(config_.energy, config_.species, lattice_, tile->pos, -1);
    r.rate[5] = config_.energy.rate(r.activation[5]);
    sum += r.rate[5];
    r.sum = sum;
    sums_[static_cast<std::size_t>(slot)] = sum;
}

void Engine::refresh_all() {
    cache_.resize(static_cast<std::size_t>(lattice_.slot_count()));
    sums_.resize(static_cast<std::size_t>(lattice_.slot_count()), 0.0);
    for (int slot = 0; slot < lattice_.slot_count(); ++slot) refresh_slot(slot);
}

void Engine::refresh_around(Pos p, std::vector<int>& dirty) const {
    const int self = lattice_.slot_of(p);
    if (self >= 0) dirty.push_back(self);
    for (Direction d : kDirections) {
        const int s = lattice_.slot_of(lattice_.neighbor(p, d));
        if (s >= 0) dirty.push_back(s);
    }
}

void Engine::apply_dirty(std::vector<int>& dirty) {
    std::sort(dirty.begin(), dirty.end());
    dirty.erase(std::unique(dirty.begin(), dirty.end()), dirty.end());
    for (int slot : dirty) refresh_slot(slot);
}

bool Engine::deposition_allowed() const {
    return lattice_.coverage() < config_.max_coverage;
}

EventRecord Engine::deposit() {
    const long empties =
        static_cast<long>(lattice_.side()) * lattice_.side() - lattice_.occupied_count();
    if (empties <= 0) raise(Errc::no_empty_site, "deposition requested on a full lattice");

    // Draw (2): index of the target among empty sites in row-major order.
    long target = static_cast<long>(rng_.uniform_index(static_cast<std::uint64_t>(empties)));
    Pos pos{};
    const int side = lattice_.side();
    for (long idx = 0; idx < static_cast<long>(side) * side; ++idx) {
        const Pos p{static_cast<int>(idx / side), static_cast<int>(idx % side)};
        if (lattice_.occupied(p)) continue;
        if (target == 0) {
            pos = p;
            break;
        }
        --target;
    }

    // Draw (3): species by concentration weights, in species order.
    const double u = rng_.uniform01();
    double cum = 0.0;
    int species_id = static_cast<int>(config_.species.size()); // residual fallback
    for (const SpeciesDescriptor& sp : config_.species.all()) {
        cum += sp.concentration;
        if (u < cum) {
            species_id = sp.id;
            break;
        }
    }

    // Draw (4): orientation uniform in {0..3}.
    const int orientation = static_cast<int>(rng_.uniform_index(4));

    lattice_.place({species_id, orientation, pos});
    ++counters_.depositions;

    std::vector<int> dirty;
    refresh_around(pos, dirty);
    apply_dirty(dirty);

    return {step_, EventKind::deposited, pos, 0.0, species_id, orientation};
}

EventRecord Engine::apply_transition(int slot, int entry) {
    const TileInstance* tile = lattice_.slot(slot);
    const Pos pos = tile->pos;
    const double activation = cache_[static_cast<std::size_t>(slot)].activation[
        static_cast<std::size_t>(entry)];

    EventRecord event{step_, EventKind::stalled, pos, activation, 0, 0};
    std::vector<int> dirty;
    if (entry < 4) {
        const Direction d = static_cast<Direction>(entry);
        const Pos to = lattice_.neighbor(pos, d);
        lattice_.move(pos, to);
        ++counters_.moves;
        event.kind = static_cast<EventKind>(static_cast<int>(EventKind::move_north) + entry);
        refresh_around(pos, dirty);
        refresh_around(to, dirty);
    } else {
        lattice_.rotate(pos, entry == 4 ? +1 : -1);
        ++counters_.rotations;
        event.kind = entry == 4 ? EventKind::rotate_cw : EventKind::rotate_ccw;
        refresh_around(pos, dirty);
    }
    apply_dirty(dirty);
    return event;
}

EventRecord Engine::step() {
    if (full_recompute_) refresh_all();

    const int n = lattice_.slot_count();
    double total = 0.0;
    for (int i = 0; i < n; ++i) total += sums_[static_cast<std::size_t>(i)];

    // R_Dep leaves the roulette once the coverage cap is reached,
    // preserving the relative rates among the remaining diffusions.
    const double deposition_rate =
        deposition_allowed() ? config_.energy.deposition_rate() : 0.0;

    EventRecord event;
    if (total == 0.0 && deposition_rate == 0.0) {
        ++counters_.stalls;
        event = {step_, EventKind::stalled, {0, 0}, 0.0, 0, 0};
    } else {
        const double shoot = rng_.uniform01() * (total + deposition_rate);
        int chosen_slot = -1;
        int chosen_entry = -1;
        double acc = 0.0;
        for (int slot = 0; slot < n && chosen_slot < 0; ++slot) {
            const double sum = sums_[static_cast<std::size_t>(slot)];
            if (sum <= 0.0 || acc + sum <= shoot) {
                acc += sum;
                continue;
            }
            // Walk this tile's entries from the prefix so far.
            const SlotRates& r = cache_[static_cast<std::size_t>(slot)];
            double inner = acc;
            int last_feasible = -1;
            for (int e = 0; e < 6; ++e) {
                if (e < 4 && !r.movable[static_cast<std::size_t>(e)]) continue;
                const double rate = r.rate[static_cast<std::size_t>(e)];
                last_feasible = e;
                inner += rate;
                if (inner > shoot) {
                    chosen_slot = slot;
                    chosen_entry = e;
                    break;
                }
            }
            if (chosen_slot < 0) {
                // Rounding gap between the slot sum and its sequential
                // prefix; settle on the tile's last feasible entry.
                chosen_slot = slot;
                chosen_entry = last_feasible;
            }
        }

        if (chosen_slot >= 0) {
            event = apply_transition(chosen_slot, chosen_entry);
        } else if (deposition_rate > 0.0) {
            event = deposit();
        } else {
            // Rounding edge with the deposition channel closed: fall back
            // to the last feasible transition on the lattice.
            int slot = n - 1;
            while (slot >= 0 && sums_[static_cast<std::size_t>(slot)] <= 0.0) --slot;
            if (slot < 0) {
                ++counters_.stalls;
                event = {step_, EventKind::stalled, {0, 0}, 0.0, 0, 0};
            } else {
                // Rotations are always feasible for a live tile.
                event = apply_transition(slot, 5);
            }
        }
    }

    if (observer_) observer_(event);
    ++step_;
    return event;
}

void Engine::run() {
    for (long i = 0; i < config_.steps; ++i) step();
}

std::vector<Transition> Engine::cached_transitions() const {
    std::vector<Transition> out;
    for (int slot = 0; slot < lattice_.slot_count(); ++slot) {
        const TileInstance* tile = lattice_.slot(slot);
        if (!tile) continue;
        const SlotRates& r = cache_[static_cast<std::size_t>(slot)];
        for (int e = 0; e < 6; ++e) {
            if (e < 4 && !r.movable[static_cast<std::size_t>(e)]) continue;
            out.push_back({static_cast<TransitionKind>(e), tile->pos,
                           r.activation[static_cast<std::size_t>(e)],
                           r.rate[static_cast<std::size_t>(e)]});
        }
    }
    return out;
}

RunResult run(const SimConfig& config, const std::function<void(const EventRecord&)>& observer) {
    Engine engine(config);
    if (observer) engine.set_observer(observer);
    engine.run();
    return {engine.lattice(), engine.counters()};
}

std::string event_log_line(const EventRecord& event) {
    std::ostringstream os;
    os << event.step << '\t' << event_kind_name(event.kind) << '\t' << event.pos.row << '\t'
       << event.pos.col << '\t' << event.activation;
    return os.str();
}

} // namespace tilekmc
