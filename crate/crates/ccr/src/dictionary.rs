use std::io::Write;
use std::sync::Arc;

use moellerlab_greenhyp::{GreenSystem, HyperbolicOperator};
use moellerlab_lattice::Section;
use nalgebra::DMatrix;

use crate::CcrError;

/// Antisymmetry defect allowed in a pairing table, relative to its size.
pub const ANTISYMMETRY_TOLERANCE: f64 = 1e-10;

/// Real antisymmetric table `G_ij = G(f_i, f_j)` of a finite set of
/// generators.
#[derive(Debug, Clone, PartialEq)]
pub struct PairingTable(DMatrix<f64>);

impl PairingTable {
    /// Rejects tables whose antisymmetry defect exceeds `tolerance`
    /// relative to `max(‖G‖∞, 1)`.
    pub fn new(matrix: DMatrix<f64>, tolerance: f64) -> Result<Self, CcrError> {
        if !matrix.is_square() {
            return Err(CcrError::Shape { rows: matrix.nrows(), cols: matrix.ncols(), expected: matrix.nrows() });
        }
        let defect = (&matrix + matrix.transpose()).amax() / matrix.amax().max(1.0);
        if defect > tolerance {
            return Err(CcrError::NotAntisymmetric { defect });
        }
        Ok(Self(matrix))
    }

    pub fn len(&self) -> usize {
        self.0.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.0.nrows() == 0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[(i, j)]
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    /// Largest entrywise difference.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64, CcrError> {
        if self.len() != other.len() {
            return Err(CcrError::DictionaryMismatch { left: self.len(), right: other.len() });
        }
        Ok((&self.0 - &other.0).amax())
    }

    /// One `i,j,value` row per entry.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), CcrError> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["i", "j", "value"])?;
        for i in 0..self.len() {
            for j in 0..self.len() {
                w.write_record([i.to_string(), j.to_string(), format!("{:e}", self.0[(i, j)])])?;
            }
        }
        w.flush().map_err(csv::Error::from)?;
        Ok(())
    }
}

/// Test sections `f_1 … f_D` over one operator, with their propagator
/// pairings `G_ij = Σ ⟨f_i, G f_j⟩ vol`.
#[derive(Debug, Clone)]
pub struct FieldDictionary {
    operator: Arc<HyperbolicOperator>,
    sections: Vec<Section>,
    images: Vec<Vec<f64>>,
    table: PairingTable,
}

impl FieldDictionary {
    pub fn new(op: &HyperbolicOperator, sections: Vec<Section>) -> Result<Self, CcrError> {
        let system = GreenSystem::new(op)?;
        Self::with_system(&system, sections)
    }

    /// Reuses an existing Green system of the operator.
    pub fn with_system(system: &GreenSystem, sections: Vec<Section>) -> Result<Self, CcrError> {
        let op = system.operator();
        if sections.iter().any(|f| f.grid() != op.grid()) {
            return Err(CcrError::GridMismatch);
        }
        let images: Vec<Vec<f64>> = sections.iter().map(|f| system.causal_raw(f.values())).collect();
        let weighted: Vec<Vec<f64>> = sections.iter().map(|f| op.weigh_raw(f.values())).collect();
        let d = sections.len();
        let table = DMatrix::from_fn(d, d, |i, j| weighted[i].iter().zip(&images[j]).map(|(a, b)| a * b).sum());
        Ok(Self { operator: Arc::new(op.clone()), sections, images, table: PairingTable::new(table, ANTISYMMETRY_TOLERANCE)? })
    }

    pub fn len(&self) -> usize {
        self.sections.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sections.is_empty()
    }

    pub fn operator(&self) -> &HyperbolicOperator {
        &self.operator
    }

    pub fn sections(&self) -> &[Section] {
        &self.sections
    }

    /// `G f_i` as raw values.
    pub fn propagated(&self, i: usize) -> &[f64] {
        &self.images[i]
    }

    pub fn table(&self) -> &PairingTable {
        &self.table
    }
}
