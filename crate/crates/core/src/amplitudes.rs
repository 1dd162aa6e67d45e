use num_complex::Complex64;

use crate::model::DispersionData;
use crate::quaternion::SymplecticPair;

/// The eight scattering coefficients `C1..C8` of a single barrier.
///
/// Outside the barrier the field is `e^{ik0x} + (C1 + jC2) e^{−ik0x}` on the
/// left and `(C7 + jC8) e^{ik0x}` on the right. Inside, `interior` holds the
/// full symplectic amplitude of each wave, in the order `e^{ik+x}`,
/// `e^{−ik+x}`, `e^{ik−x}`, `e^{−ik−x}`; `C3..C6` are their α-components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Amplitudes {
    pub c: [Complex64; 8],
    pub interior: [SymplecticPair; 4],
    pub dispersion: DispersionData,
}

impl Amplitudes {
    /// `C_index` with the 1-based numbering used for the coefficients.
    pub fn coefficient(&self, index: usize) -> Complex64 {
        self.c[index - 1]
    }

    pub fn reflection(&self) -> SymplecticPair {
        SymplecticPair::new(self.c[0], self.c[1])
    }

    pub fn transmission(&self) -> SymplecticPair {
        SymplecticPair::new(self.c[6], self.c[7])
    }

    pub fn max_abs(&self) -> f64 {
        self.c.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    /// `‖self.c − other.c‖∞ / ‖other.c‖∞`.
    pub fn relative_difference(&self, other: &Amplitudes) -> f64 {
        let diff = self
            .c
            .iter()
            .zip(&other.c)
            .fold(0.0_f64, |m, (a, b)| m.max((a - b).norm()));
        let scale = other.max_abs();
        if scale > 0.0 {
            diff / scale
        } else {
            diff
        }
    }

    /// `|C1|² + |C2|² + |C7|² + |C8|²`.
    pub fn magnitude_sum(&self) -> f64 {
        self.reflection().norm_sqr() + self.transmission().norm_sqr()
    }
}
