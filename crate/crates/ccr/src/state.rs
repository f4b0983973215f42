use std::io::Write;
use std::sync::Arc;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::algebra::AlgebraElement;
use crate::dictionary::{FieldDictionary, PairingTable};
use crate::iso::StarIsomorphism;
use crate::kernel::TwoPointKernel;
use crate::CcrError;

/// Default tolerance for the invariants of a two-point table.
pub const STATE_TOLERANCE: f64 = 1e-10;

/// Gaussian state fixed by `W_ij = ω(Φ_i Φ_j)` over a dictionary, with the
/// grid two-point function it came from when there is one.
#[derive(Debug, Clone)]
pub struct QuasifreeState {
    table: DMatrix<Complex64>,
    pairing: PairingTable,
    kernel: Option<Arc<TwoPointKernel>>,
    ccr_residual: f64,
    min_eigenvalue: f64,
}

impl QuasifreeState {
    /// Checks `W = W*`, `W − Wᵀ = iG` and `W ≥ 0`, each relative to
    /// `max(‖W‖∞, 1)`.
    pub fn new(table: DMatrix<Complex64>, pairing: PairingTable, tolerance: f64) -> Result<Self, CcrError> {
        let d = pairing.len();
        if table.shape() != (d, d) {
            return Err(CcrError::Shape { rows: table.nrows(), cols: table.ncols(), expected: d });
        }
        let scale = table.iter().fold(1.0_f64, |m, v| m.max(v.norm()));
        let hermitian = (&table - table.adjoint()).iter().fold(0.0_f64, |m, v| m.max(v.norm())) / scale;
        if hermitian > tolerance {
            return Err(CcrError::NotHermitian { defect: hermitian });
        }
        let mut ccr_residual: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                let r = table[(i, j)] - table[(j, i)] - Complex64::new(0.0, pairing.get(i, j));
                ccr_residual = ccr_residual.max(r.norm());
            }
        }
        ccr_residual /= scale;
        if ccr_residual > tolerance {
            return Err(CcrError::NotCcrCompatible { residual: ccr_residual });
        }
        let hermitian_part = (&table + table.adjoint()) * Complex64::new(0.5, 0.0);
        let min_eigenvalue = if d == 0 { 0.0 } else { SymmetricEigen::new(hermitian_part).eigenvalues.min() };
        if min_eigenvalue < -tolerance * scale {
            return Err(CcrError::NotPositive { eigenvalue: min_eigenvalue });
        }
        Ok(Self { table, pairing, kernel: None, ccr_residual, min_eigenvalue })
    }

    /// `W_ij = ω₂(f_i, f_j)` over the sections of `dict`.
    pub fn from_kernel(kernel: Arc<TwoPointKernel>, dict: &FieldDictionary, tolerance: f64) -> Result<Self, CcrError> {
        let table = kernel_table(&kernel, dict)?;
        let mut state = Self::new(table, dict.table().clone(), tolerance)?;
        state.kernel = Some(kernel);
        Ok(state)
    }

    pub fn len(&self) -> usize {
        self.pairing.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairing.is_empty()
    }

    pub fn table(&self) -> &DMatrix<Complex64> {
        &self.table
    }

    pub fn pairing(&self) -> &PairingTable {
        &self.pairing
    }

    pub fn kernel(&self) -> Option<&TwoPointKernel> {
        self.kernel.as_deref()
    }

    /// `max|W − Wᵀ − iG|` relative to `max(‖W‖∞, 1)`.
    pub fn ccr_residual(&self) -> f64 {
        self.ccr_residual
    }

    /// Smallest eigenvalue of `W`.
    pub fn min_eigenvalue(&self) -> f64 {
        self.min_eigenvalue
    }

    /// One `i,j,re,im` row per entry.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), CcrError> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["i", "j", "re", "im"])?;
        for i in 0..self.len() {
            for j in 0..self.len() {
                let v = self.table[(i, j)];
                w.write_record([i.to_string(), j.to_string(), format!("{:e}", v.re), format!("{:e}", v.im)])?;
            }
        }
        w.flush().map_err(csv::Error::from)?;
        Ok(())
    }
}

fn kernel_table(kernel: &TwoPointKernel, dict: &FieldDictionary) -> Result<DMatrix<Complex64>, CcrError> {
    for (index, f) in dict.sections().iter().enumerate() {
        if f.grid() != kernel.grid() {
            return Err(CcrError::GridMismatch);
        }
        if !kernel.covers(f) {
            return Err(CcrError::OutsideKernel { index });
        }
    }
    let s = dict.sections();
    Ok(DMatrix::from_fn(s.len(), s.len(), |i, j| kernel.pair_raw(s[i].values(), s[j].values())))
}

fn pairings(w: &DMatrix<Complex64>, idx: &[usize]) -> Complex64 {
    match idx.len() {
        0 => Complex64::new(1.0, 0.0),
        n if n % 2 == 1 => Complex64::new(0.0, 0.0),
        n => {
            let mut rest = Vec::with_capacity(n - 2);
            let mut sum = Complex64::new(0.0, 0.0);
            for k in 1..n {
                rest.clear();
                rest.extend(idx[1..].iter().enumerate().filter(|(p, _)| *p + 1 != k).map(|(_, v)| *v));
                sum += w[(idx[0], idx[k])] * pairings(w, &rest);
            }
            sum
        }
    }
}

/// `ω(Φ_{i_1} ⋯ Φ_{i_n})`: zero for odd `n`, otherwise the sum over pairings
/// `Π W_{i_a i_b}` with `a < b` in every pair.
pub fn quasifree_npoint(state: &QuasifreeState, indices: &[usize]) -> Result<Complex64, CcrError> {
    if let Some(&index) = indices.iter().find(|&&i| i >= state.len()) {
        return Err(CcrError::IndexOutOfRange { index, len: state.len() });
    }
    Ok(pairings(&state.table, indices))
}

/// Linear extension of [`quasifree_npoint`] over the words of `a`.
pub fn state_eval(state: &QuasifreeState, a: &AlgebraElement) -> Result<Complex64, CcrError> {
    let mut sum = Complex64::new(0.0, 0.0);
    for (w, c) in a.terms() {
        sum += c * quasifree_npoint(state, w)?;
    }
    Ok(sum)
}

/// `ω' = ω ∘ 𝓡` on the target algebra of `iso`. With a grid two-point
/// function, `W'_ij = ω₂(R† f_i, R† f_j)` and the pulled-back function is
/// kept (dense, small grids); otherwise `ω` must be a state over the image
/// dictionary. The result is checked against `G'`.
pub fn pullback_state(state: &QuasifreeState, iso: &StarIsomorphism, tolerance: f64) -> Result<QuasifreeState, CcrError> {
    let target = iso.target();
    match &state.kernel {
        Some(kernel) => {
            let table = kernel_table(kernel, iso.source())?;
            let mut out = QuasifreeState::new(table, target.table().clone(), tolerance)?;
            out.kernel = Some(Arc::new(kernel.pullback(iso.moller())?));
            Ok(out)
        }
        None => {
            if state.len() != iso.source().len() {
                return Err(CcrError::DictionaryMismatch { left: state.len(), right: iso.source().len() });
            }
            let algebra = iso.target_algebra();
            let d = target.len();
            let mut table = DMatrix::zeros(d, d);
            for i in 0..d {
                for j in 0..d {
                    let word = AlgebraElement::monomial(vec![i, j], Complex64::new(1.0, 0.0));
                    table[(i, j)] = state_eval(state, &iso.apply(&algebra.normal_form(&word)?)?)?;
                }
            }
            QuasifreeState::new(table, target.table().clone(), tolerance)
        }
    }
}
