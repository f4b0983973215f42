use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::algebra::{AlgebraElement, CcrAlgebra};
use crate::dictionary::FieldDictionary;
use crate::CcrError;

/// Expresses every dictionary generator through a retained subset, using
/// `Φ(f) = Φ(f')` whenever `f − f' ∈ N Γ_c`, detected as `G f = G f'`.
#[derive(Debug, Clone)]
pub struct OnShellSplit {
    retained: Vec<usize>,
    coefficients: DMatrix<f64>,
}

fn scale_of(dict: &FieldDictionary) -> f64 {
    (0..dict.len()).map(|i| dict.propagated(i).iter().fold(0.0_f64, |m, v| m.max(v.abs()))).fold(f64::MIN_POSITIVE, f64::max)
}

fn images(dict: &FieldDictionary, members: &[usize]) -> DMatrix<f64> {
    let rows = dict.operator().len();
    DMatrix::from_fn(rows, members.len(), |r, c| dict.propagated(members[c])[r])
}

/// Least-squares coefficients of `g` on the columns of `y` and the max-norm
/// residual.
fn project(y: &DMatrix<f64>, g: &[f64]) -> (DVector<f64>, f64) {
    let b = DVector::from_column_slice(g);
    if y.ncols() == 0 {
        return (DVector::zeros(0), b.amax());
    }
    let c = y.clone().svd(true, true).solve(&b, 1e-14).expect("svd with both factors");
    let residual = (&b - y * &c).amax();
    (c, residual)
}

impl OnShellSplit {
    /// Every member must lie in the span of `retained` modulo `N Γ_c`, with
    /// max-norm residual of the propagated sections at most `tolerance`
    /// relative to the largest one.
    pub fn new(dict: &FieldDictionary, retained: &[usize], tolerance: f64) -> Result<Self, CcrError> {
        for &i in retained {
            if i >= dict.len() {
                return Err(CcrError::IndexOutOfRange { index: i, len: dict.len() });
            }
        }
        let scale = scale_of(dict);
        for (k, &i) in retained.iter().enumerate() {
            let (_, residual) = project(&images(dict, &retained[..k]), dict.propagated(i));
            if residual <= tolerance * scale {
                return Err(CcrError::DependentBasis { index: i });
            }
        }
        let y = images(dict, retained);
        let mut coefficients = DMatrix::zeros(dict.len(), retained.len());
        for i in 0..dict.len() {
            let (c, residual) = project(&y, dict.propagated(i));
            if residual > tolerance * scale {
                return Err(CcrError::NotClosed { index: i, residual: residual / scale });
            }
            for (p, v) in c.iter().enumerate() {
                coefficients[(i, p)] = if v.abs() <= tolerance { 0.0 } else { *v };
            }
        }
        Ok(Self { retained: retained.to_vec(), coefficients })
    }

    /// Retains members in order whenever they are independent of the ones
    /// already kept.
    pub fn greedy(dict: &FieldDictionary, tolerance: f64) -> Result<Self, CcrError> {
        let scale = scale_of(dict);
        let mut retained = Vec::new();
        for i in 0..dict.len() {
            let (_, residual) = project(&images(dict, &retained), dict.propagated(i));
            if residual > tolerance * scale {
                retained.push(i);
            }
        }
        Self::new(dict, &retained, tolerance)
    }

    pub fn retained(&self) -> &[usize] {
        &self.retained
    }

    /// `Φ_i = Σ_p c_ip Φ_{retained[p]}`.
    pub fn coefficients(&self) -> &DMatrix<f64> {
        &self.coefficients
    }

    /// Generator images as algebra elements.
    pub fn images(&self) -> Vec<AlgebraElement> {
        (0..self.coefficients.nrows())
            .map(|i| {
                self.retained.iter().enumerate().fold(AlgebraElement::zero(), |acc, (p, &k)| {
                    &acc + &AlgebraElement::monomial(vec![k], Complex64::new(self.coefficients[(i, p)], 0.0))
                })
            })
            .collect()
    }
}

/// Rewrites `a` in the retained generators only; `Φ(Nh) ↦ 0`.
pub fn on_shell_reduce(algebra: &CcrAlgebra, split: &OnShellSplit, a: &AlgebraElement) -> Result<AlgebraElement, CcrError> {
    algebra.substitute(a, &split.images())
}
