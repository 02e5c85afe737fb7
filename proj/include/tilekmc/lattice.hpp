#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <vector>

#include "tilekmc/errors.hpp"

namespace tilekmc {

/// Canonical side order. Orientation is measured in clockwise quarter
/// turns, so the effective label on side k of a tile with orientation o
/// is edge_labels[(k - o) mod 4].
enum class Direction : int { north = 0, east = 1, south = 2, west = 3 };

constexpr std::array<Direction, 4> kDirections = {
    Direction::north, Direction::east, Direction::south, Direction::west};

constexpr Direction opposite(Direction d) {
    return static_cast<Direction>((static_cast<int>(d) + 2) % 4);
}

struct Pos {
    int row = 0;
    int col = 0;

    friend bool operator==(const Pos&, const Pos&) = default;
};

/// One species of tile: a label on each of the four sides (given at
/// orientation 0, in north/east/south/west order) and a relative
/// deposition weight. A species whose four labels are equal is
/// iso-functionalised; otherwise it is hetero-functionalised.
struct SpeciesDescriptor {
    int id = 0; // 1-based; doubles as the raster palette index
    std::array<int, 4> edge_labels{};
    double concentration = 0.0;

    bool iso_functionalised() const {
        return edge_labels[0] == edge_labels[1] &&
               edge_labels[1] == edge_labels[2] &&
               edge_labels[2] == edge_labels[3];
    }
};

/// Validated, immutable set of species. Ids must be 1..n in order and
/// concentrations must sum to 1 within 1e-9.
class SpeciesSet {
public:
    SpeciesSet(std::vector<SpeciesDescriptor> species, int label_count);

    const SpeciesDescriptor& by_id(int species_id) const;
    std::size_t size() const { return species_.size(); }
    int label_count() const { return label_count_; }
    const std::vector<SpeciesDescriptor>& all() const { return species_; }

    /// Effective label shown on lattice side `side` by a tile of this
    /// species at the given orientation.
    int edge_label(int species_id, int orientation, Direction side) const;

private:
    std::vector<SpeciesDescriptor> species_;
    int label_count_ = 0;
};

struct TileInstance {
    int species = 0;
    int orientation = 0; // clockwise quarter turns, 0..3
    Pos pos;
};

/// Periodic N x N square site lattice holding at most one tile per site.
/// The lattice is the sole owner of placement state; every mutation
/// keeps the site index and the tile slots consistent.
///
/// Tiles live in stable slots; slot order is deposition order as long as
/// no tile is removed, which is the enumeration order the simulation
/// engine relies on for deterministic transition selection.
class Lattice {
public:
    explicit Lattice(int side);

    int side() const { return side_; }
    int occupied_count() const { return occupied_; }
    double coverage() const {
        return static_cast<double>(occupied_) / (static_cast<double>(side_) * side_);
    }

    Pos wrap(Pos p) const {
        auto w = [this](int x) {
            x %= side_;
            return x < 0 ? x + side_ : x;
        };
        return {w(p.row), w(p.col)};
    }

    Pos neighbor(Pos p, Direction d) const;

    struct Neighbor {
        Pos pos;
        bool occupied;
    };

    /// The four wrapped von Neumann neighbours in canonical order
    /// (north, east, south, west) with their occupancy bits.
    std::array<Neighbor, 4> neighbors(Pos p) const;

    bool occupied(Pos p) const { return site(p) >= 0; }
    const TileInstance* at(Pos p) const;

    /// Places a tile at tile.pos. Errors: site_occupied.
    void place(const TileInstance& tile);

    /// Moves the tile at `from` to the empty, von Neumann adjacent site
    /// `to`, preserving species and orientation.
    /// Errors: site_empty, site_occupied, not_adjacent.
    void move(Pos from, Pos to);

    /// Rotates the tile at pos by one quarter turn; sense +1 is
    /// clockwise, -1 counter-clockwise. Errors: site_empty.
    void rotate(Pos pos, int sense);

    /// Removes and returns the tile at pos. Errors: site_empty.
    TileInstance remove(Pos pos);

    struct Aggregate {
        std::vector<Pos> members; // row-major discovery order
        std::map<int, int> species_counts;
        int size() const { return static_cast<int>(members.size()); }
    };

    struct AggregateReport {
        std::vector<Aggregate> aggregates; // connected components of size >= 2
        int singletons = 0;                // isolated tiles, reported separately
    };

    /// Connected components under 4-connectivity with periodic wrap.
    AggregateReport aggregates() const;

    struct HeteroBondStats {
        double fraction = 0.0; // hetero pairs / total adjacent occupied pairs
        long hetero_pairs = 0;
        long total_pairs = 0; // fraction is 0 with total_pairs == 0 when no pair exists
    };

    /// Fraction of adjacent occupied (unordered) pairs whose species differ.
    HeteroBondStats hetero_bond_fraction() const;

    /// Full consistency check of the placement index; throws on violation.
    void validate() const;

    // Slot access for the engine: slots are stable and enumerate tiles in
    // deposition order while no removal happens.
    int slot_count() const { return static_cast<int>(slots_.size()); }
    const TileInstance* slot(int idx) const;
    int slot_of(Pos p) const { return site(p); }

private:
    int site_index(Pos p) const { return p.row * side_ + p.col; }
    std::int32_t site(Pos p) const;

    int side_;
    std::vector<std::int32_t> site_to_slot_; // -1 when empty
    std::vector<TileInstance> slots_;
    std::vector<std::int32_t> free_slots_;
    std::vector<bool> slot_live_;
    int occupied_ = 0;
};

} // namespace tilekmc
