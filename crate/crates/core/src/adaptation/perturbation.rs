use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Adaptation rule; also tags the layout of a perturbation set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Scheme {
    /// Take/reject: one tested vector per frame.
    #[serde(rename = "TR")]
    TakeReject,
    /// Plus/minus: both signs tested in the two halves of the training.
    #[serde(rename = "PM")]
    PlusMinus,
}

/// Unitary DFT matrix as a list of columns, `Q[a][b] = exp(-j 2 pi a b / R) / sqrt(R)`.
pub fn dft_matrix(r: usize) -> Vec<Vec<Complex64>> {
    assert!(r >= 1, "DFT size must be positive");
    let scale = 1.0 / (r as f64).sqrt();
    (0..r)
        .map(|b| {
            (0..r)
                .map(|a| Complex64::from_polar(scale, -2.0 * PI * ((a * b) % r) as f64 / r as f64))
                .collect()
        })
        .collect()
}

/// Deterministic perturbation vectors shared by all nodes, used cyclically.
///
/// Take/reject uses `[Q, jQ, -Q, -jQ]` (4R columns), plus/minus `[Q, jQ]`
/// (2R columns), with `Q` the unitary DFT matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationSet {
    columns: Vec<Vec<Complex64>>,
    scheme: Scheme,
}

impl PerturbationSet {
    pub fn dft(num_relays: usize, scheme: Scheme) -> Self {
        let q = dft_matrix(num_relays);
        let rotations: &[Complex64] = match scheme {
            Scheme::TakeReject => &[
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 1.0),
                Complex64::new(-1.0, 0.0),
                Complex64::new(0.0, -1.0),
            ],
            Scheme::PlusMinus => &[Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)],
        };
        let columns = rotations
            .iter()
            .flat_map(|rot| q.iter().map(move |col| col.iter().map(|x| x * rot).collect()))
            .collect();
        Self { columns, scheme }
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    /// Number of columns `N`.
    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    pub fn num_relays(&self) -> usize {
        self.columns.first().map_or(0, Vec::len)
    }

    pub fn columns(&self) -> &[Vec<Complex64>] {
        &self.columns
    }

    /// Column index used in frame `k`.
    pub fn index(&self, frame_index: u64) -> usize {
        (frame_index % self.columns.len() as u64) as usize
    }

    /// Perturbation vector of frame `k`, i.e. column `k mod N`.
    pub fn column(&self, frame_index: u64) -> &[Complex64] {
        &self.columns[self.index(frame_index)]
    }
}
