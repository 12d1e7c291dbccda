#ifndef EMICAST_ENERGY_HPP
#define EMICAST_ENERGY_HPP

#include <cmath>
#include <string>
#include <vector>

#include "emicast/core.hpp"

namespace emicast {

struct Constituent {
    std::string species;
    double energy = 0.0; // per-atom energy, eV
    int count = 0;
};

struct CohesiveInput {
    double e_system = 0.0;                // total energy of the 2D material, eV
    std::vector<Constituent> constituents;
    int n = 0;                            // total atoms in the system
    int big_n = 0;                        // normalization count
};

struct BindingInput {
    double e_total = 0.0;
    double e_substrate = 0.0;
    double e_adsorbate = 0.0;
};

inline int constituent_atom_count(const CohesiveInput& in) {
    int total = 0;
    for (const auto& c : in.constituents) total += c.count;
    return total;
}

/// True when the declared atom total matches the constituent counts; a
/// mismatch is reported as a warning by callers, not an error.
inline bool counts_consistent(const CohesiveInput& in) {
    return in.n == constituent_atom_count(in);
}

/// (E_system - sum_x count_x * E_x) / N, in eV per normalization unit.
/// The constituent sum is count-weighted; the declared atom total `n` is kept
/// for validation only.
inline double cohesive_energy(const CohesiveInput& in) {
    if (in.big_n <= 0)
        fail(ErrorCode::ZeroNormalization, "normalization count N must be positive");
    if (!std::isfinite(in.e_system))
        fail(ErrorCode::BadArgument, "e_system must be finite");
    double constituent_sum = 0.0;
    for (const auto& c : in.constituents) {
        if (c.count <= 0) fail(ErrorCode::BadArgument, "constituent counts must be positive");
        if (!std::isfinite(c.energy))
            fail(ErrorCode::BadArgument, "constituent energy must be finite");
        constituent_sum += static_cast<double>(c.count) * c.energy;
    }
    return (in.e_system - constituent_sum) / static_cast<double>(in.big_n);
}

/// E_b = E_total - (E_substrate + E_adsorbate); negative means favorable
/// adsorption.
inline double binding_energy(const BindingInput& in) {
    if (!std::isfinite(in.e_total) || !std::isfinite(in.e_substrate) ||
        !std::isfinite(in.e_adsorbate))
        fail(ErrorCode::BadArgument, "binding energies must be finite");
    return in.e_total - (in.e_substrate + in.e_adsorbate);
}

} // namespace emicast

#endif // EMICAST_ENERGY_HPP
