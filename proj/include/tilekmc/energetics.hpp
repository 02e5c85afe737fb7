#pragma once

#include <vector>

#include "tilekmc/lattice.hpp"

namespace tilekmc {

/// Functional groups with measured pairwise binding energies. Used by
/// the built-in label table; the simulation core works with plain label
/// ids and any symmetric energy table.
enum class FunctionalGroup : int {
    nitro = 0,
    carboxylic_acid = 1,
    bromine = 2,
    iodine = 3,
    pyridine = 4,
};

constexpr int kFunctionalGroupCount = 5;
const char* functional_group_name(FunctionalGroup g) noexcept;

/// All energetic parameters of a run: the symmetric label-pair binding
/// energies (eV), the tile-substrate binding energy E_s, the rotation
/// binding energy E_r, the scaled temperature TT0 and the deposition
/// rate R_Dep. Immutable after construction; safe to share across
/// threads.
class EnergyModel {
public:
    EnergyModel(int label_count, double substrate_energy, double rotation_energy,
                double temperature, double deposition_rate);

    /// Symmetric pair lookup. Unmeasured pairs default to 0 eV (no
    /// attraction). Errors: unknown_label.
    double bond_energy(int label_a, int label_b) const;

    /// Sets pair_energy(a, b) = pair_energy(b, a) = energy.
    void set_pair_energy(int label_a, int label_b, double energy);

    /// Transition rate exp(-activation / TT0), Arrhenius-style; strictly
    /// decreasing in the activation energy.
    double rate(double activation) const;

    int label_count() const { return label_count_; }
    double substrate_energy() const { return substrate_energy_; } // E_s
    double rotation_energy() const { return rotation_energy_; }   // E_r
    double temperature() const { return temperature_; }           // TT0
    double deposition_rate() const { return deposition_rate_; }   // R_Dep

    /// The five functional groups with their measured binding energies.
    static EnergyModel functional_groups(double substrate_energy, double rotation_energy,
                                         double temperature, double deposition_rate);

    /// Two-label table for the two-species experiment protocol:
    /// pair(0,0)=e11, pair(1,1)=e22, pair(0,1)=e12.
    static EnergyModel two_species(double e11, double e22, double e12,
                                   double substrate_energy, double rotation_energy,
                                   double temperature, double deposition_rate);

private:
    void check_label(int label) const;

    int label_count_;
    std::vector<double> pair_; // label_count^2, symmetric
    double substrate_energy_;
    double rotation_energy_;
    double temperature_;
    double deposition_rate_;
};

/// Activation energy for hopping the tile at `pos` one site in
/// `direction`: E_s plus the bond energies broken with the three
/// occupied non-target neighbours. Preconditions: pos occupied, target
/// empty. Errors: site_empty, site_occupied.
double activation_motion(const EnergyModel& model, const SpeciesSet& species,
                         const Lattice& lattice, Pos pos, Direction direction);

/// Activation energy for rotating the tile at `pos` one quarter turn
/// (sense +1 clockwise, -1 counter-clockwise): E_r, plus each current
/// bond whose cyclically-next neighbour site is empty, plus the saddle
/// terms |E_before - E_after| against every occupied neighbour, where
/// E_after is the bond that neighbour would see once the tile has
/// turned. Errors: site_empty.
double activation_rotation(const EnergyModel& model, const SpeciesSet& species,
                           const Lattice& lattice, Pos pos, int sense);

} // namespace tilekmc
