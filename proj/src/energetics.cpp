#include "tilekmc/energetics.hpp"

#include <cmath>
#include <string>

namespace tilekmc {

const char* functional_group_name(FunctionalGroup g) noexcept {
    switch (g) {
        case FunctionalGroup::nitro: return "nitro";
        case FunctionalGroup::carboxylic_acid: return "carboxylic_acid";
        case FunctionalGroup::bromine: return "bromine";
        case FunctionalGroup::iodine: return "iodine";
        case FunctionalGroup::pyridine: return "pyridine";
    }
    return "?";
}

EnergyModel::EnergyModel(int label_count, double substrate_energy, double rotation_energy,
                         double temperature, double deposition_rate)
    : label_count_(label_count),
      substrate_energy_(substrate_energy),
      rotation_energy_(rotation_energy),
      temperature_(temperature),
      deposition_rate_(deposition_rate) {
    if (label_count < 1) raise(Errc::bad_config, "label count must be >= 1");
    if (substrate_energy < 0.0 || rotation_energy < 0.0)
        raise(Errc::bad_config, "binding energies must be >= 0");
    if (temperature <= 0.0)
        raise(Errc::non_positive_temperature, "TT0 must be > 0");
    if (deposition_rate < 0.0)
        raise(Errc::bad_config, "deposition rate must be >= 0");
    pair_.assign(static_cast<std::size_t>(label_count) * label_count, 0.0);
}

void EnergyModel::check_label(int label) const {
    if (label < 0 || label >= label_count_)
        raise(Errc::unknown_label, "label " + std::to_string(label) +
                                       " outside configured label set of size " +
                                       std::to_string(label_count_));
}

double EnergyModel::bond_energy(int label_a, int label_b) const {
    check_label(label_a);
    check_label(label_b);
    return pair_[static_cast<std::size_t>(label_a) * label_count_ + label_b];
}

void EnergyModel::set_pair_energy(int label_a, int label_b, double energy) {
    check_label(label_a);
    check_label(label_b);
    if (energy < 0.0) raise(Errc::bad_config, "bond energy must be >= 0");
    pair_[static_cast<std::size_t>(label_a) * label_count_ + label_b] = energy;
    pair_[static_cast<std::size_t>(label_b) * label_count_ + label_a] = energy;
}

double EnergyModel::rate(double activation) const {
    if (temperature_ <= 0.0)
        raise(Errc::non_positive_temperature, "TT0 must be > 0");
    return std::exp(-activation / temperature_);
}

EnergyModel EnergyModel::functional_groups(double substrate_energy, double rotation_energy,
                                           double temperature, double deposition_rate) {
    EnergyModel m(kFunctionalGroupCount, substrate_energy, rotation_energy, temperature,
                  deposition_rate);
    using G = FunctionalGroup;
    auto set = [&m](G a, G b, double e) {
        m.set_pair_energy(static_cast<int>(a), static_cast<int>(b), e);
    };
    // Measured pair binding energies in eV; unmeasured pairs stay at 0.
    set(G::nitro, G::iodine, 0.13);
    set(G::carboxylic_acid, G::carboxylic_acid, 0.30);
    set(G::carboxylic_acid, G::pyridine, 0.39);
    set(G::bromine, G::bromine, 1.00);
    set(G::iodine, G::iodine, 0.087);
    set(G::iodine, G::pyridine, 0.17);
    set(G::pyridine, G::pyridine, 0.10);
    return m;
}

EnergyModel EnergyModel::two_species(double e11, double e22, double e12,
                                     double substrate_energy, double rotation_energy,
                                     double temperature, double deposition_rate) {
    EnergyModel m(2, substrate_energy, rotation_energy, temperature, deposition_rate);
    m.set_pair_energy(0, 0, e11);
    m.set_pair_energy(1, 1, e22);
    m.set_pair_energy(0, 1, e12);
    return m;
}

namespace {

// Bond between the tile at pos (with the given orientation) and the
// occupied neighbour on side k; 0 when that site is empty.
double facing_bond(const EnergyModel& model, const SpeciesSet& species, const Lattice& lattice,
                   const TileInstance& tile, int orientation, Direction side) {
    const TileInstance* other = lattice.at(lattice.neighbor(tile.pos, side));
    if (!other) return 0.0;
    const int own = species.edge_label(tile.species, orientation, side);
    const int theirs = species.edge_label(other->species, other->orientation, opposite(side));
    return model.bond_energy(own, theirs);
}

} // namespace

double activation_motion(const EnergyModel& model, const SpeciesSet& species,
                         const Lattice& lattice, Pos pos, Direction direction) {
    const TileInstance* tile = lattice.at(pos);
    if (!tile) raise(Errc::site_empty, "no tile at motion origin");
    if (lattice.occupied(lattice.neighbor(pos, direction)))
        raise(Errc::site_occupied, "motion target occupied");

    double energy = model.substrate_energy();
    for (Direction side : kDirections) {
        if (side == direction) continue;
        energy += facing_bond(model, species, lattice, *tile, tile->orientation, side);
    }
    return energy;
}

double activation_rotation(const EnergyModel& model, const SpeciesSet& species,
                           const Lattice& lattice, Pos pos, int sense) {
    if (sense != 1 && sense != -1)
        raise(Errc::invalid_argument, "rotation sense must be +1 or -1");
    const TileInstance* tile = lattice.at(pos);
    if (!tile) raise(Errc::site_empty, "no tile at rotation site");

    const int turned = ((tile->orientation + sense) % 4 + 4) % 4;

    std::array<bool, 4> occ{};
    std::array<double, 4> before{};
    std::array<double, 4> after{};
    for (int k = 0; k < 4; ++k) {
        const Direction side = static_cast<Direction>(k);
        occ[static_cast<std::size_t>(k)] = lattice.occupied(lattice.neighbor(pos, side));
        before[static_cast<std::size_t>(k)] =
            facing_bond(model, species, lattice, *tile, tile->orientation, side);
        after[static_cast<std::size_t>(k)] =
            facing_bond(model, species, lattice, *tile, turned, side);
    }

    double energy = model.rotation_energy();
    for (int k = 0; k < 4; ++k) {
        const std::size_t i = static_cast<std::size_t>(k);
        const std::size_t next = static_cast<std::size_t>((k + 1) % 4);
        if (occ[i] && !occ[next]) energy += before[i];       // bond broken into empty flank
        if (occ[i]) energy += std::abs(before[i] - after[i]); // saddle point
    }
    return energy;
}

} // namespace tilekmc
