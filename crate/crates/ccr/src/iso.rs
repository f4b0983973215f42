use moellerlab_greenhyp::CheckReport;
use moellerlab_lattice::Section;
use moellerlab_moller::MollerOperator;
use num_complex::Complex64;

use crate::algebra::{AlgebraElement, CcrAlgebra};
use crate::dictionary::FieldDictionary;
use crate::CcrError;

/// Default bound on `|G'_ij − G_ij(R† f_i, R† f_j)|`.
pub const COMMUTATOR_TOLERANCE: f64 = 1e-9;

/// `R† f'_i` for every member of a dictionary over the target of `r`,
/// as a dictionary over the source.
pub fn image_dictionary(r: &MollerOperator, target: &FieldDictionary) -> Result<FieldDictionary, CcrError> {
    if target.operator() != r.target() {
        return Err(CcrError::OperatorMismatch);
    }
    let images = target.sections().iter().map(|f| r.apply_adjoint(f)).collect::<Result<Vec<Section>, _>>()?;
    FieldDictionary::new(r.source(), images)
}

/// `𝓡(Φ'(f)) = Φ(R† f)` from the CCR algebra over a target dictionary to
/// the one over its image dictionary.
#[derive(Debug, Clone)]
pub struct StarIsomorphism {
    moller: MollerOperator,
    target: FieldDictionary,
    source: FieldDictionary,
    residual: f64,
}

/// Builds the image dictionary and checks that the commutator tables agree
/// to `tolerance` relative to `max(‖G'‖∞, 1)`.
pub fn star_isomorphism(r: &MollerOperator, target: &FieldDictionary, tolerance: f64) -> Result<StarIsomorphism, CcrError> {
    let source = image_dictionary(r, target)?;
    let scale = target.table().matrix().amax().max(1.0);
    let residual = target.table().max_abs_diff(source.table())? / scale;
    if residual > tolerance {
        return Err(CcrError::CommutatorMismatch { residual });
    }
    Ok(StarIsomorphism { moller: r.clone(), target: target.clone(), source, residual })
}

impl StarIsomorphism {
    pub fn moller(&self) -> &MollerOperator {
        &self.moller
    }

    /// Dictionary over `g'`.
    pub fn target(&self) -> &FieldDictionary {
        &self.target
    }

    /// Image dictionary over `g`.
    pub fn source(&self) -> &FieldDictionary {
        &self.source
    }

    /// Commutator-table mismatch found at construction.
    pub fn residual(&self) -> f64 {
        self.residual
    }

    pub fn target_algebra(&self) -> CcrAlgebra {
        CcrAlgebra::new(self.target.table().clone())
    }

    pub fn source_algebra(&self) -> CcrAlgebra {
        CcrAlgebra::new(self.source.table().clone())
    }

    /// Image of an element of the target algebra.
    pub fn apply(&self, a: &AlgebraElement) -> Result<AlgebraElement, CcrError> {
        let algebra = self.source_algebra();
        let fields = (0..self.source.len()).map(|i| algebra.field(i)).collect::<Result<Vec<_>, _>>()?;
        algebra.substitute(a, &fields)
    }

    /// Products, involution, unit and normal ordering carried over, on a
    /// sample of elements of the target algebra taken in consecutive pairs.
    pub fn homomorphism_checks(&self, sample: &[AlgebraElement], tolerance: f64) -> Result<Vec<CheckReport>, CcrError> {
        let (tgt, src) = (self.target_algebra(), self.source_algebra());
        let (mut product, mut star, mut square): (f64, f64, f64) = (0.0, 0.0, 0.0);
        for pair in sample.windows(2) {
            let (a, b) = (&pair[0], &pair[1]);
            let lhs = self.apply(&tgt.multiply(a, b)?)?;
            let rhs = src.multiply(&self.apply(a)?, &self.apply(b)?)?;
            product = product.max(lhs.distance(&rhs) / rhs.max_abs().max(1.0));
            let lhs = self.apply(&tgt.star(a)?)?;
            let rhs = src.star(&self.apply(a)?)?;
            star = star.max(lhs.distance(&rhs) / rhs.max_abs().max(1.0));
            let mut raw = AlgebraElement::zero();
            for (u, x) in a.terms() {
                for (v, y) in b.terms() {
                    let mut w = v.to_vec();
                    w.extend_from_slice(u);
                    raw = &raw + &AlgebraElement::monomial(w, x * y);
                }
            }
            let mapped = self.apply(&raw)?;
            let formed = self.apply(&tgt.normal_form(&raw)?)?;
            square = square.max(mapped.distance(&formed) / formed.max_abs().max(1.0));
        }
        let unit = self.apply(&AlgebraElement::unit())?.distance(&AlgebraElement::scalar(Complex64::new(1.0, 0.0)));
        Ok(vec![
            CheckReport::new("R(ab) = R(a) R(b)", product, tolerance),
            CheckReport::new("R(a*) = R(a)*", star, tolerance),
            CheckReport::new("R(1) = 1", unit, tolerance),
            CheckReport::new("map then normal-order = normal-order then map", square, tolerance),
        ])
    }
}
