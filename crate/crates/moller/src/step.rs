use std::sync::Arc;

use moellerlab_greenhyp::{symmetrized_blend, GreenSystem, HyperbolicOperator, DENSE_LIMIT};
use moellerlab_lattice::{Range, ScalarField, Section};
use nalgebra::DMatrix;
use serde::Serialize;

use crate::MollerError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum StepKind {
    /// `Id − G⁺_A (A − N₀)`.
    Plus,
    /// `Id − G⁻_B (B − A)`.
    Minus,
    /// `Id + G⁺_{N₀} (A − N₀)`.
    PlusInverse,
    /// `Id + G⁻_A (B − A)`.
    MinusInverse,
}

impl StepKind {
    fn retarded(self) -> bool {
        matches!(self, StepKind::Plus | StepKind::PlusInverse)
    }

    fn sign(self) -> f64 {
        match self {
            StepKind::Plus | StepKind::Minus => -1.0,
            StepKind::PlusInverse | StepKind::MinusInverse => 1.0,
        }
    }
}

/// One factor `Id ± G^±(M − S)`, with `G^±` a Green operator of some
/// operator in the link and `M − S` a difference of two link operators.
#[derive(Debug, Clone)]
pub struct MollerStep {
    kind: StepKind,
    green: Arc<GreenSystem>,
    minuend: Arc<HyperbolicOperator>,
    subtrahend: Arc<HyperbolicOperator>,
    unchanged: LevelRange,
}

/// Inclusive range of time levels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LevelRange {
    pub first: usize,
    pub last: usize,
}

impl LevelRange {
    pub fn contains(&self, n: usize) -> bool {
        self.first <= n && n <= self.last
    }

    pub fn is_empty(&self) -> bool {
        self.first > self.last
    }
}

impl MollerStep {
    pub fn kind(&self) -> StepKind {
        self.kind
    }

    /// Levels on which the output equals the input.
    pub fn unchanged_levels(&self) -> LevelRange {
        self.unchanged
    }

    pub fn len(&self) -> usize {
        self.minuend.len()
    }

    pub fn is_empty(&self) -> bool {
        self.minuend.is_empty()
    }

    fn difference(&self, u: &[f64]) -> Vec<f64> {
        let a = self.minuend.apply_raw(u);
        let b = self.subtrahend.apply_raw(u);
        a.iter().zip(&b).map(|(x, y)| x - y).collect()
    }

    fn difference_transpose(&self, v: &[f64]) -> Vec<f64> {
        let a = self.minuend.apply_transpose_raw(v);
        let b = self.subtrahend.apply_transpose_raw(v);
        a.iter().zip(&b).map(|(x, y)| x - y).collect()
    }

    pub fn apply_raw(&self, u: &[f64]) -> Vec<f64> {
        let d = self.difference(u);
        let gd = if self.kind.retarded() { self.green.retarded_raw(&d) } else { self.green.advanced_raw(&d) };
        let s = self.kind.sign();
        u.iter().zip(&gd).map(|(x, y)| x + s * y).collect()
    }

    /// Action of the transposed matrix.
    pub fn apply_transpose_raw(&self, v: &[f64]) -> Vec<f64> {
        let z = if self.kind.retarded() { self.green.retarded_transpose_raw(v) } else { self.green.advanced_transpose_raw(v) };
        let d = self.difference_transpose(&z);
        let s = self.kind.sign();
        v.iter().zip(&d).map(|(x, y)| x + s * y).collect()
    }

    pub fn to_dense(&self) -> Result<DMatrix<f64>, MollerError> {
        dense_of(self.len(), |u| self.apply_raw(u))
    }
}

/// Matrix of a linear map given by its action, column by column.
pub(crate) fn dense_of(dim: usize, apply: impl Fn(&[f64]) -> Vec<f64>) -> Result<DMatrix<f64>, MollerError> {
    if dim > DENSE_LIMIT {
        return Err(MollerError::TooLarge { dim });
    }
    let mut out = DMatrix::zeros(dim, dim);
    let mut e = vec![0.0; dim];
    for c in 0..dim {
        e[c] = 1.0;
        out.column_mut(c).copy_from_slice(&apply(&e));
        e[c] = 0.0;
    }
    Ok(out)
}

/// Data of one comparable pair `g₀ ⪯ g₁`: the endpoint operators, the
/// interpolation profile `χ`, the scale profiles and the three operators
/// `N₀`, `A = ρÑ_χ`, `B = ρ'N₁` whose Green operators build the steps.
#[derive(Debug, Clone)]
pub struct MollerLink {
    source: Arc<HyperbolicOperator>,
    target: Arc<HyperbolicOperator>,
    blend: Arc<HyperbolicOperator>,
    scaled_blend: Arc<HyperbolicOperator>,
    scaled_target: Arc<HyperbolicOperator>,
    chi: ScalarField,
    rho: ScalarField,
    rho_target: ScalarField,
    transition: LevelRange,
    green_source: Arc<GreenSystem>,
    green_blend: Arc<GreenSystem>,
    green_target: Arc<GreenSystem>,
}

fn level_where(chi: &ScalarField, n: usize, pred: impl Fn(f64) -> bool) -> bool {
    chi.level(n).iter().all(|&c| pred(c))
}

impl MollerLink {
    /// Link with `ρ = vol_{g_χ}/vol_{g₀}` and `ρ' = vol_{g₁}/vol_{g₀}`.
    pub fn new(source: &HyperbolicOperator, target: &HyperbolicOperator, chi: &ScalarField) -> Result<Self, MollerError> {
        Self::build(source, target, chi, None)
    }

    /// Link with a caller-chosen positive `ρ`, which must be 1 before the
    /// transition and `vol_{g₁}/vol_{g₀}` after it.
    pub fn with_scale(source: &HyperbolicOperator, target: &HyperbolicOperator, chi: &ScalarField, rho: &ScalarField) -> Result<Self, MollerError> {
        Self::build(source, target, chi, Some(rho))
    }

    fn build(source: &HyperbolicOperator, target: &HyperbolicOperator, chi: &ScalarField, rho: Option<&ScalarField>) -> Result<Self, MollerError> {
        let g = *source.grid();
        if target.grid() != &g || !g.same_lattice(chi.grid()) {
            return Err(MollerError::GridMismatch);
        }
        if !source.is_self_adjoint() {
            return Err(MollerError::NotSelfAdjoint { index: 0 });
        }
        if !target.is_self_adjoint() {
            return Err(MollerError::NotSelfAdjoint { index: 1 });
        }
        let nt = g.nt;
        if let Some(level) = (0..nt).find(|&n| !level_where(chi, n, |c| (0.0..=1.0).contains(&c))) {
            return Err(MollerError::ProfileWindow { level });
        }
        let first = (0..nt).find(|&n| !level_where(chi, n, |c| c == 0.0)).unwrap_or(nt);
        let last = (0..nt).rev().find(|&n| !level_where(chi, n, |c| c == 1.0)).unwrap_or(0);
        let transition = LevelRange { first, last };

        let blend = symmetrized_blend(source, target, chi)?;
        let rho_target = target.volume().zip_with(source.volume(), Range::Positive, |a, b| a / b)?;
        let rho = match rho {
            None => blend.volume().zip_with(source.volume(), Range::Positive, |a, b| a / b)?,
            Some(r) => {
                if !g.same_lattice(r.grid()) {
                    return Err(MollerError::GridMismatch);
                }
                for n in 0..nt {
                    let ok = r.level(n).iter().zip(rho_target.level(n)).all(|(&v, &t)| {
                        v > 0.0 && (n >= first || v == 1.0) && (n <= last || v == t)
                    });
                    if !ok {
                        return Err(MollerError::ScaleProfile { level: n });
                    }
                }
                r.clone()
            }
        };
        let scaled_blend = blend.scaled(&rho)?;
        let scaled_target = target.scaled(&rho_target)?;

        let link = Self {
            green_source: Arc::new(GreenSystem::new(source)?),
            green_blend: Arc::new(GreenSystem::new(&scaled_blend)?),
            green_target: Arc::new(GreenSystem::new(&scaled_target)?),
            source: Arc::new(source.clone()),
            target: Arc::new(target.clone()),
            blend: Arc::new(blend),
            scaled_blend: Arc::new(scaled_blend),
            scaled_target: Arc::new(scaled_target),
            chi: chi.clone(),
            rho,
            rho_target,
            transition,
        };
        link.check_identity_regions()?;
        Ok(link)
    }

    /// Rows of `A` equal those of `N₀` before the transition and those of
    /// `B` after it, so the steps leave those levels untouched.
    fn check_identity_regions(&self) -> Result<(), MollerError> {
        let g = *self.source.grid();
        let rows_equal = |a: &HyperbolicOperator, b: &HyperbolicOperator, n: usize| {
            (0..g.nx).all(|j| moellerlab_greenhyp::NEIGHBORS.iter().all(|&k| a.block(n, j, k) == b.block(n, j, k)))
        };
        for n in 0..self.transition.first.saturating_sub(1) {
            if !rows_equal(&self.scaled_blend, &self.source, n) {
                return Err(MollerError::IdentityRegion { level: n });
            }
        }
        for n in (self.transition.last + 2).min(g.nt)..g.nt {
            if !rows_equal(&self.scaled_blend, &self.scaled_target, n) {
                return Err(MollerError::IdentityRegion { level: n });
            }
        }
        Ok(())
    }

    pub fn source(&self) -> &HyperbolicOperator {
        &self.source
    }

    pub fn target(&self) -> &HyperbolicOperator {
        &self.target
    }

    /// Symmetrized interpolating operator `Ñ_χ`.
    pub fn blend(&self) -> &HyperbolicOperator {
        &self.blend
    }

    /// `A = ρÑ_χ`.
    pub fn scaled_blend(&self) -> &HyperbolicOperator {
        &self.scaled_blend
    }

    /// `B = ρ'N₁`.
    pub fn scaled_target(&self) -> &HyperbolicOperator {
        &self.scaled_target
    }

    pub fn profile(&self) -> &ScalarField {
        &self.chi
    }

    pub fn scale(&self) -> &ScalarField {
        &self.rho
    }

    pub fn target_scale(&self) -> &ScalarField {
        &self.rho_target
    }

    /// Levels where `χ` is neither identically 0 nor identically 1.
    pub fn transition(&self) -> LevelRange {
        self.transition
    }

    pub fn green_source(&self) -> &GreenSystem {
        &self.green_source
    }

    pub fn green_blend(&self) -> &GreenSystem {
        &self.green_blend
    }

    pub fn green_target(&self) -> &GreenSystem {
        &self.green_target
    }

    fn before(&self) -> LevelRange {
        match self.transition.first {
            0 => LevelRange { first: 1, last: 0 },
            f => LevelRange { first: 0, last: f - 1 },
        }
    }

    fn after(&self) -> LevelRange {
        LevelRange { first: self.transition.last + 1, last: self.source.grid().nt - 1 }
    }

    pub fn plus(&self) -> MollerStep {
        MollerStep {
            kind: StepKind::Plus,
            green: self.green_blend.clone(),
            minuend: self.scaled_blend.clone(),
            subtrahend: self.source.clone(),
            unchanged: self.before(),
        }
    }

    pub fn minus(&self) -> MollerStep {
        MollerStep {
            kind: StepKind::Minus,
            green: self.green_target.clone(),
            minuend: self.scaled_target.clone(),
            subtrahend: self.scaled_blend.clone(),
            unchanged: self.after(),
        }
    }

    pub fn plus_inverse(&self) -> MollerStep {
        MollerStep {
            kind: StepKind::PlusInverse,
            green: self.green_source.clone(),
            minuend: self.scaled_blend.clone(),
            subtrahend: self.source.clone(),
            unchanged: self.before(),
        }
    }

    pub fn minus_inverse(&self) -> MollerStep {
        MollerStep {
            kind: StepKind::MinusInverse,
            green: self.green_blend.clone(),
            minuend: self.scaled_target.clone(),
            subtrahend: self.scaled_blend.clone(),
            unchanged: self.after(),
        }
    }

    /// `R₊` then `R₋`.
    pub fn forward_steps(&self) -> Vec<MollerStep> {
        vec![self.plus(), self.minus()]
    }

    /// `R₋⁻¹` then `R₊⁻¹`.
    pub fn inverse_steps(&self) -> Vec<MollerStep> {
        vec![self.minus_inverse(), self.plus_inverse()]
    }

    /// `(A − N₀) f` as a section, for support scans.
    pub fn plus_difference(&self, f: &Section) -> Result<Section, MollerError> {
        Ok(Section::from_values(f.grid(), self.plus().difference(f.values()))?)
    }

    /// `(B − A) f` as a section.
    pub fn minus_difference(&self, f: &Section) -> Result<Section, MollerError> {
        Ok(Section::from_values(f.grid(), self.minus().difference(f.values()))?)
    }
}
