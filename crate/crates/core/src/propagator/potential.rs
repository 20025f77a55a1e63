use crate::model::Grid1D;

/// Real potential samples `V(x_j)` in energy units.
#[derive(Debug, Clone, PartialEq)]
pub struct Potential {
    values: Vec<f64>,
}

impl Potential {
    pub fn from_values(values: Vec<f64>) -> Self {
        Self { values }
    }

    pub fn zero(grid: &Grid1D) -> Self {
        Self::constant(grid, 0.0)
    }

    pub fn constant(grid: &Grid1D, v0: f64) -> Self {
        Self {
            values: vec![v0; grid.n_points()],
        }
    }

    /// `V(x) = m omega_c^2 (x - x_c)^2 / 2`, with `x - x_c` taken as the
    /// nearest periodic image so the seam sits opposite `x_c`.
    pub fn harmonic(grid: &Grid1D, m: f64, omega_c: f64, x_c: f64) -> Self {
        let l = grid.length();
        let values = grid
            .positions()
            .map(|x| {
                let d = (x - x_c + 0.5 * l).rem_euclid(l) - 0.5 * l;
                0.5 * m * omega_c * omega_c * d * d
            })
            .collect();
        Self { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `Some(V0)` when every sample equals `V0`.
    pub fn constant_value(&self) -> Option<f64> {
        let first = *self.values.first()?;
        self.values.iter().all(|&v| v == first).then_some(first)
    }
}
