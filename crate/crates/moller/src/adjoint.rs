use moellerlab_greenhyp::{CheckReport, HyperbolicOperator};
use nalgebra::DMatrix;

use crate::operator::MollerOperator;
use crate::step::MollerLink;
use crate::MollerError;

/// `T^{†gg'} = V_g⁻¹ Tᵀ V_{g'}` of a matrix `T` mapping sections weighted
/// by `V_g` to sections weighted by `V_{g'}`.
#[derive(Debug, Clone)]
pub struct AdjointOperator {
    matrix: DMatrix<f64>,
    source_weight: DMatrix<f64>,
    target_weight: DMatrix<f64>,
}

impl AdjointOperator {
    /// `source_weight` is `V_g`, `target_weight` is `V_{g'}`.
    pub fn new(map: &DMatrix<f64>, source_weight: &DMatrix<f64>, target_weight: &DMatrix<f64>) -> Result<Self, MollerError> {
        let dim = map.nrows();
        if map.ncols() != dim || source_weight.shape() != (dim, dim) || target_weight.shape() != (dim, dim) {
            return Err(MollerError::GridMismatch);
        }
        let inv = source_weight.clone().try_inverse().ok_or(MollerError::GridMismatch)?;
        Ok(Self { matrix: inv * map.transpose() * target_weight, source_weight: source_weight.clone(), target_weight: target_weight.clone() })
    }

    /// Adjoint with the quadrature weights of two operators' metrics.
    pub fn between(map: &DMatrix<f64>, source: &HyperbolicOperator, target: &HyperbolicOperator) -> Result<Self, MollerError> {
        Self::new(map, &source.weight_dense(), &target.weight_dense())
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.matrix
    }

    /// `|Σ⟨T†h, f⟩V_g − Σ⟨h, T f⟩V_{g'}|` relative to the larger side.
    pub fn defining_residual(&self, map: &DMatrix<f64>, f: &[f64], h: &[f64]) -> f64 {
        let f = nalgebra::DVector::from_column_slice(f);
        let h = nalgebra::DVector::from_column_slice(h);
        let lhs = (&self.matrix * &h).dot(&(&self.source_weight * &f));
        let rhs = h.dot(&(&self.target_weight * (map * &f)));
        (lhs - rhs).abs() / lhs.abs().max(rhs.abs()).max(1.0)
    }
}

fn relative(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (a - b).amax() / b.amax().max(1.0)
}

fn adj(map: &DMatrix<f64>, vg: &DMatrix<f64>, vg2: &DMatrix<f64>) -> Result<DMatrix<f64>, MollerError> {
    Ok(AdjointOperator::new(map, vg, vg2)?.into_matrix())
}

/// Dense checks of the weighted-adjoint calculus on one link, with
/// `R₊ : g₀ → g_χ` and `R₋ : g_χ → g₁`:
/// self-adjoint `N` is its own adjoint, linearity, `(R₋R₊)† = R₊†R₋†`,
/// `(T†)† = T` and `(T⁻¹)† = (T†)⁻¹`.
pub fn adjoint_calculus(link: &MollerLink, tolerance: f64) -> Result<Vec<CheckReport>, MollerError> {
    let v0 = link.source().weight_dense();
    let vc = link.blend().weight_dense();
    let v1 = link.target().weight_dense();
    let plus = link.plus().to_dense()?;
    let minus = link.minus().to_dense()?;
    let plus_inv = link.plus_inverse().to_dense()?;
    let minus_inv = link.minus_inverse().to_dense()?;
    let dim = plus.nrows();
    let id = DMatrix::<f64>::identity(dim, dim);

    let n0 = link.source().to_dense();
    let self_adj = relative(&adj(&n0, &v0, &v0)?, &n0);

    let (a, b) = (0.75, -1.25);
    let combo = adj(&(&plus * a + &plus_inv * b), &v0, &vc)?;
    let parts = adj(&plus, &v0, &vc)? * a + adj(&plus_inv, &v0, &vc)? * b;
    let linear = relative(&combo, &parts);

    let composite = adj(&(&minus * &plus), &v0, &v1)?;
    let chained = adj(&plus, &v0, &vc)? * adj(&minus, &vc, &v1)?;
    let reversal = relative(&composite, &chained);

    let plus_adj = adj(&plus, &v0, &vc)?;
    let double = relative(&adj(&plus_adj, &vc, &v0)?, &plus);

    let inv_adj = adj(&plus_inv, &vc, &v0)?;
    let inverse = relative(&(&plus_adj * &inv_adj), &id).max(relative(&(&inv_adj * &plus_adj), &id));
    let minus_adj = adj(&minus, &vc, &v1)?;
    let minus_inv_adj = adj(&minus_inv, &v1, &vc)?;
    let inverse_minus = relative(&(&minus_adj * &minus_inv_adj), &id).max(relative(&(&minus_inv_adj * &minus_adj), &id));

    Ok(vec![
        CheckReport::new("N self-adjoint => N^dagger = N", self_adj, tolerance),
        CheckReport::new("(aT + bT')^dagger = a T^dagger + b T'^dagger", linear, tolerance),
        CheckReport::new("(R- R+)^dagger = R+^dagger R-^dagger", reversal, tolerance),
        CheckReport::new("(T^dagger)^dagger = T", double, tolerance),
        CheckReport::new("(R+^-1)^dagger = (R+^dagger)^-1", inverse, tolerance),
        CheckReport::new("(R-^-1)^dagger = (R-^dagger)^-1", inverse_minus, tolerance),
    ])
}

/// Dense checks that the action-based `R†` and `(R⁻¹)†` agree with the
/// weighted transposes of the dense matrices, and that they are inverse.
pub fn adjoint_action_checks(r: &MollerOperator, tolerance: f64) -> Result<Vec<CheckReport>, MollerError> {
    let dense = r.to_dense()?;
    let expected = AdjointOperator::between(&dense, r.source(), r.target())?.into_matrix();
    let action = crate::step::dense_of(r.len(), |h| r.apply_adjoint_raw(h))?;
    let inv_expected = AdjointOperator::between(&r.inverse_dense()?, r.target(), r.source())?.into_matrix();
    let inv_action = crate::step::dense_of(r.len(), |h| r.apply_inverse_adjoint_raw(h))?;
    let id = DMatrix::<f64>::identity(r.len(), r.len());
    Ok(vec![
        CheckReport::new("R^dagger action = V_g^-1 R^T V_g'", relative(&action, &expected), tolerance),
        CheckReport::new("(R^-1)^dagger action = V_g'^-1 (R^-1)^T V_g", relative(&inv_action, &inv_expected), tolerance),
        CheckReport::new("(R^-1)^dagger R^dagger = Id", relative(&(&inv_action * &action), &id), tolerance),
    ])
}
