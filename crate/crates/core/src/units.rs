/// Physical constants carried through every computation.
///
/// Charge uses Gaussian units, matching the electromagnetic module.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Units {
    pub hbar: f64,
    pub c: f64,
    pub mass: f64,
    /// Magnitude of the electron charge; the electron carries `-charge`.
    pub charge: f64,
}

impl Default for Units {
    fn default() -> Self {
        Self {
            hbar: 1.0,
            c: 1.0,
            mass: 1.0,
            charge: 1.0,
        }
    }
}

impl Units {
    /// Rest energy `m c²`.
    pub fn rest_energy(&self) -> f64 {
        self.mass * self.c * self.c
    }

    /// Reduced Compton length `ħ / (m c)`.
    pub fn compton_length(&self) -> f64 {
        self.hbar / (self.mass * self.c)
    }

    /// On-shell energy `√(m²c⁴ + |p|²c²)`.
    pub fn energy(&self, p: [f64; 3]) -> f64 {
        let p2 = p[0] * p[0] + p[1] * p[1] + p[2] * p[2];
        let mc2 = self.rest_energy();
        (mc2 * mc2 + p2 * self.c * self.c).sqrt()
    }
}
