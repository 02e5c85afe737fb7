#include "tilekmc/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

namespace tilekmc {

SpeciesSet::SpeciesSet(std::vector<SpeciesDescriptor> species, int label_count)
    : species_(std::move(species)), label_count_(label_count) {
    if (species_.empty()) raise(Errc::bad_config, "species set is empty");
    if (label_count_ < 1) raise(Errc::bad_config, "label count must be >= 1");
    double total = 0.0;
    for (std::size_t i = 0; i < species_.size(); ++i) {
        const auto& sp = species_[i];
        if (sp.id != static_cast<int>(i) + 1)
            raise(Errc::bad_config, "species ids must be 1..n in order, got id " +
                                        std::to_string(sp.id) + " at index " + std::to_string(i));
        for (int label : sp.edge_labels)
            if (label < 0 || label >= label_count_)
                raise(Errc::unknown_label, "edge label " + std::to_string(label) +
                                               " outside configured label set");
        if (sp.concentration < 0.0)
            raise(Errc::bad_config, "species concentration must be >= 0");
        total += sp.concentration;
    }
    if (std::abs(total - 1.0) > 1e-9)
        raise(Errc::bad_config, "species concentrations must sum to 1, got " + std::to_string(total));
}

const SpeciesDescriptor& SpeciesSet::by_id(int species_id) const {
    if (species_id < 1 || species_id > static_cast<int>(species_.size()))
        raise(Errc::bad_config, "unknown species id " + std::to_string(species_id));
    return species_[static_cast<std::size_t>(species_id) - 1];
}

int SpeciesSet::edge_label(int species_id, int orientation, Direction side) const {
    const auto& sp = by_id(species_id);
    const int k = static_cast<int>(side);
    return sp.edge_labels[static_cast<std::size_t>(((k - orientation) % 4 + 4) % 4)];
}

Lattice::Lattice(int side) : side_(side) {
    if (side < 1) raise(Errc::invalid_argument, "lattice side must be >= 1");
    site_to_slot_.assign(static_cast<std::size_t>(side) * side, -1);
}

std::int32_t Lattice::site(Pos p) const {
    const Pos w = wrap(p);
    return site_to_slot_[static_cast<std::size_t>(site_index(w))];
}

Pos Lattice::neighbor(Pos p, Direction d) const {
    switch (d) {
        case Direction::north: return wrap({p.row - 1, p.col});
        case Direction::east: return wrap({p.row, p.col + 1});
        case Direction::south: return wrap({p.row + 1, p.col});
        case Direction::west: return wrap({p.row, p.col - 1});
    }
    raise(Errc::invalid_argument, "bad direction");
}

std::array<Lattice::Neighbor, 4> Lattice::neighbors(Pos p) const {
    std::array<Neighbor, 4> out;
    for (int k = 0; k < 4; ++k) {
        const Pos q = neighbor(p, static_cast<Direction>(k));
        out[static_cast<std::size_t>(k)] = {q, occupied(q)};
    }
    return out;
}

const TileInstance* Lattice::at(Pos p) const {
    const std::int32_t s = site(p);
    return s < 0 ? nullptr : &slots_[static_cast<std::size_t>(s)];
}

void Lattice::place(const TileInstance& tile) {
    const Pos p = wrap(tile.pos);
    auto& cell = site_to_slot_[static_cast<std::size_t>(site_index(p))];
    if (cell >= 0)
        raise(Errc::site_occupied, "site (" + std::to_string(p.row) + "," +
                                       std::to_string(p.col) + ") already holds a tile");

    std::int32_t slot;
    if (!free_slots_.empty()) {
        slot = free_slots_.back();
        free_slots_.pop_back();
        slots_[static_cast<std::size_t>(slot)] = tile;
        slot_live_[static_cast<std::size_t>(slot)] = true;
    } else {
        slot = static_cast<std::int32_t>(slots_.size());
        slots_.push_back(tile);
        slot_live_.push_back(true);
    }
    slots_[static_cast<std::size_t>(slot)].pos = p;
    slots_[static_cast<std::size_t>(slot)].orientation = ((tile.orientation % 4) + 4) % 4;
    cell = slot;
    ++occupied_;
}

void Lattice::move(Pos from, Pos to) {
    const Pos f = wrap(from);
    const Pos t = wrap(to);
    const std::int32_t slot = site(f);
    if (slot < 0) raise(Errc::site_empty, "no tile at move origin");
    if (occupied(t)) raise(Errc::site_occupied, "move target occupied");
    bool adjacent = false;
    for (Direction d : kDirections)
        if (neighbor(f, d) == t) adjacent = true;
    if (!adjacent) raise(Errc::not_adjacent, "move target is not a von Neumann neighbour");

    site_to_slot_[static_cast<std::size_t>(site_index(f))] = -1;
    site_to_slot_[static_cast<std::size_t>(site_index(t))] = slot;
    slots_[static_cast<std::size_t>(slot)].pos = t;
}

void Lattice::rotate(Pos pos, int sense) {
    if (sense != 1 && sense != -1)
        raise(Errc::invalid_argument, "rotation sense must be +1 or -1");
    const std::int32_t slot = site(pos);
    if (slot < 0) raise(Errc::site_empty, "no tile to rotate");
    auto& tile = slots_[static_cast<std::size_t>(slot)];
    tile.orientation = ((tile.orientation + sense) % 4 + 4) % 4;
}

TileInstance Lattice::remove(Pos pos) {
    const Pos p = wrap(pos);
    auto& cell = site_to_slot_[static_cast<std::size_t>(site_index(p))];
    if (cell < 0) raise(Errc::site_empty, "no tile to remove");
    const std::int32_t slot = cell;
    cell = -1;
    slot_live_[static_cast<std::size_t>(slot)] = false;
    free_slots_.push_back(slot);
    --occupied_;
    return slots_[static_cast<std::size_t>(slot)];
}

const TileInstance* Lattice::slot(int idx) const {
    if (idx < 0 || idx >= slot_count() || !slot_live_[static_cast<std::size_t>(idx)])
        return nullptr;
    return &slots_[static_cast<std::size_t>(idx)];
}

Lattice::AggregateReport Lattice::aggregates() const {
    AggregateReport report;
    std::vector<bool> seen(site_to_slot_.size(), false);
    std::vector<Pos> stack;

    for (int r = 0; r < side_; ++r) {
        for (int c = 0; c < side_; ++c) {
            const Pos start{r, c};
            const int idx = site_index(start);
            if (seen[static_cast<std::size_t>(idx)] || !occupied(start)) continue;

            Aggregate comp;
            stack.clear();
            stack.push_back(start);
            seen[static_cast<std::size_t>(idx)] = true;
            while (!stack.empty()) {
                const Pos p = stack.back();
                stack.pop_back();
                comp.members.push_back(p);
                ++comp.species_counts[at(p)->species];
                for (Direction d : kDirections) {
                    const Pos q = neighbor(p, d);
                    const int qi = site_index(q);
                    if (!seen[static_cast<std::size_t>(qi)] && occupied(q)) {
                        seen[static_cast<std::size_t>(qi)] = true;
                        stack.push_back(q);
                    }
                }
            }
            if (comp.size() >= 2)
                report.aggregates.push_back(std::move(comp));
            else
                ++report.singletons;
        }
    }
    return report;
}

Lattice::HeteroBondStats Lattice::hetero_bond_fraction() const {
    HeteroBondStats stats;
    if (side_ >= 3) {
        // East/south enumeration visits each unordered adjacent pair once.
        for (int r = 0; r < side_; ++r) {
            for (int c = 0; c < side_; ++c) {
                const Pos p{r, c};
                const TileInstance* tp = at(p);
                if (!tp) continue;
                for (Direction d : {Direction::east, Direction::south}) {
                    const TileInstance* tq = at(neighbor(p, d));
                    if (!tq) continue;
                    ++stats.total_pairs;
                    if (tp->species != tq->species) ++stats.hetero_pairs;
                }
            }
        }
    } else {
        // Tiny lattices wrap onto themselves; deduplicate via canonical pairs.
        std::set<std::pair<int, int>> pairs;
        for (int r = 0; r < side_; ++r) {
            for (int c = 0; c < side_; ++c) {
                const Pos p{r, c};
                if (!occupied(p)) continue;
                for (Direction d : kDirections) {
                    const Pos q = neighbor(p, d);
                    if (!occupied(q)) continue;
                    const int a = site_index(p), b = site_index(q);
                    if (a == b) continue;
                    pairs.emplace(std::min(a, b), std::max(a, b));
                }
            }
        }
        for (const auto& [a, b] : pairs) {
            ++stats.total_pairs;
            const Pos pa{a / side_, a % side_}, pb{b / side_, b % side_};
            if (at(pa)->species != at(pb)->species) ++stats.hetero_pairs;
        }
    }
    if (stats.total_pairs > 0)
        stats.fraction = static_cast<double>(stats.hetero_pairs) / static_cast<double>(stats.total_pairs);
    return stats;
}

void Lattice::validate() const {
    int occupied_sites = 0;
    for (int r = 0; r < side_; ++r) {
        for (int c = 0; c < side_; ++c) {
            const std::int32_t s = site_to_slot_[static_cast<std::size_t>(site_index({r, c}))];
            if (s < 0) continue;
            ++occupied_sites;
            if (s >= slot_count() || !slot_live_[static_cast<std::size_t>(s)])
                raise(Errc::invalid_argument, "site refers to a dead slot");
            const TileInstance& tile = slots_[static_cast<std::size_t>(s)];
            if (!(tile.pos == Pos{r, c}))
                raise(Errc::invalid_argument, "tile position out of sync with its site");
            if (tile.orientation < 0 || tile.orientation > 3)
                raise(Errc::invalid_argument, "tile orientation out of range");
        }
    }
    int live_slots = 0;
    for (int i = 0; i < slot_count(); ++i)
        if (slot_live_[static_cast<std::size_t>(i)]) ++live_slots;
    if (occupied_sites != occupied_ || live_slots != occupied_)
        raise(Errc::invalid_argument, "occupancy count out of sync");
}

} // namespace tilekmc
