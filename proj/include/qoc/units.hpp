#ifndef QOC_UNITS_HPP
#define QOC_UNITS_HPP

namespace qoc::units {

// Everything runs in atomic units (hbar = 1).
inline constexpr double cm1_to_hartree = 4.556335e-6;
inline constexpr double kb_hartree_per_kelvin = 3.166812e-6;

// E[a.u.] = sqrt(I[W/cm^2] / 3.509e16); 1 TW/cm^2 is the trial-pulse scale.
inline constexpr double field_au_1twcm2 = 5.338e-3;

}  // namespace qoc::units

#endif
