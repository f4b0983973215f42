use std::sync::Arc;

use moellerlab_geometry::{LinkDirection, MetricField, ParacausalChain};
use moellerlab_greenhyp::{build_operator, HyperbolicOperator, LowerOrder};
use moellerlab_lattice::{smooth_step, FiberMetric, Range, ScalarField, Section, SpacetimeGrid};
use nalgebra::DMatrix;
use serde::Serialize;

use crate::step::{dense_of, MollerLink, MollerStep};
use crate::MollerError;

/// Mass of the Klein-Gordon operator attached to a bare metric.
pub const CANONICAL_MASS: f64 = 1.0;

/// Symmetrized Klein-Gordon operator with mass 1 and identity fiber metric.
pub fn canonical_operator(metric: &MetricField) -> Result<HyperbolicOperator, MollerError> {
    let g = metric.grid();
    let op = build_operator(metric, &LowerOrder::klein_gordon(g, CANONICAL_MASS), &FiberMetric::identity(g))?;
    Ok(op.symmetrize())
}

/// Smooth step whose transition fills the middle third of the window.
pub fn default_profile(grid: &SpacetimeGrid) -> Result<ScalarField, MollerError> {
    let span = grid.t_max - grid.t_min;
    Ok(smooth_step(&grid.with_rank(1)?, grid.t_min + span / 3.0, grid.t_min + 2.0 * span / 3.0)?)
}

/// How one link of a composed operator was realized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LinkRealization {
    /// Both ends carry the same operator.
    Identity,
    /// `R₋R₊` for `g_k ⪯ g_{k+1}`.
    Forward,
    /// Inverse of the forward map from `g_{k+1}` to `g_k`.
    Inverted,
}

/// Linear isomorphism `R` with `c'N'R = N` and `R G_N R† = G_{N'}`, stored as
/// the ordered factors of its action and of its inverse.
#[derive(Debug, Clone)]
pub struct MollerOperator {
    source: Arc<HyperbolicOperator>,
    target: Arc<HyperbolicOperator>,
    forward: Vec<MollerStep>,
    backward: Vec<MollerStep>,
    volume_ratio: ScalarField,
    links: Vec<LinkRealization>,
    parts: Vec<MollerLink>,
}

impl MollerOperator {
    /// Identity on the sections of `op`.
    pub fn identity(op: &HyperbolicOperator) -> Result<Self, MollerError> {
        let ones = ScalarField::constant(&op.grid().with_rank(1)?, 1.0, Range::Positive)?;
        Ok(Self {
            source: Arc::new(op.clone()),
            target: Arc::new(op.clone()),
            forward: Vec::new(),
            backward: Vec::new(),
            volume_ratio: ones,
            links: Vec::new(),
            parts: Vec::new(),
        })
    }

    /// `R₋R₊` of a single comparable pair.
    pub fn from_link(link: MollerLink) -> Result<Self, MollerError> {
        let volume_ratio = link.target_scale().clone();
        Ok(Self {
            source: Arc::new(link.source().clone()),
            target: Arc::new(link.target().clone()),
            forward: link.forward_steps(),
            backward: link.inverse_steps(),
            volume_ratio,
            links: vec![LinkRealization::Forward],
            parts: vec![link],
        })
    }

    pub fn source(&self) -> &HyperbolicOperator {
        &self.source
    }

    pub fn target(&self) -> &HyperbolicOperator {
        &self.target
    }

    /// `c' = vol_{g'}/vol_g`.
    pub fn volume_ratio(&self) -> &ScalarField {
        &self.volume_ratio
    }

    pub fn links(&self) -> &[LinkRealization] {
        &self.links
    }

    /// Links that carry a nontrivial map, in chain order.
    pub fn parts(&self) -> &[MollerLink] {
        &self.parts
    }

    /// Factors in the order they act.
    pub fn steps(&self) -> &[MollerStep] {
        &self.forward
    }

    pub fn inverse_steps(&self) -> &[MollerStep] {
        &self.backward
    }

    pub fn len(&self) -> usize {
        self.source.len()
    }

    pub fn is_empty(&self) -> bool {
        self.source.is_empty()
    }

    pub fn grid(&self) -> &SpacetimeGrid {
        self.source.grid()
    }

    pub fn apply_raw(&self, u: &[f64]) -> Vec<f64> {
        self.forward.iter().fold(u.to_vec(), |v, s| s.apply_raw(&v))
    }

    pub fn apply_inverse_raw(&self, u: &[f64]) -> Vec<f64> {
        self.backward.iter().fold(u.to_vec(), |v, s| s.apply_raw(&v))
    }

    pub fn apply_transpose_raw(&self, v: &[f64]) -> Vec<f64> {
        self.forward.iter().rev().fold(v.to_vec(), |w, s| s.apply_transpose_raw(&w))
    }

    pub fn apply_inverse_transpose_raw(&self, v: &[f64]) -> Vec<f64> {
        self.backward.iter().rev().fold(v.to_vec(), |w, s| s.apply_transpose_raw(&w))
    }

    /// `R† h = V_g⁻¹ Rᵀ V_{g'} h`.
    pub fn apply_adjoint_raw(&self, h: &[f64]) -> Vec<f64> {
        if self.forward.is_empty() {
            return h.to_vec();
        }
        self.source.unweigh_raw(&self.apply_transpose_raw(&self.target.weigh_raw(h)))
    }

    /// `(R⁻¹)† h = V_{g'}⁻¹ (R⁻¹)ᵀ V_g h`.
    pub fn apply_inverse_adjoint_raw(&self, h: &[f64]) -> Vec<f64> {
        if self.backward.is_empty() {
            return h.to_vec();
        }
        self.target.unweigh_raw(&self.apply_inverse_transpose_raw(&self.source.weigh_raw(h)))
    }

    fn section(&self, f: &Section, map: impl Fn(&[f64]) -> Vec<f64>) -> Result<Section, MollerError> {
        if f.grid() != self.grid() {
            return Err(MollerError::GridMismatch);
        }
        Ok(Section::from_values(f.grid(), map(f.values()))?)
    }

    pub fn apply(&self, f: &Section) -> Result<Section, MollerError> {
        self.section(f, |u| self.apply_raw(u))
    }

    pub fn apply_inverse(&self, f: &Section) -> Result<Section, MollerError> {
        self.section(f, |u| self.apply_inverse_raw(u))
    }

    pub fn apply_adjoint(&self, f: &Section) -> Result<Section, MollerError> {
        self.section(f, |u| self.apply_adjoint_raw(u))
    }

    pub fn apply_inverse_adjoint(&self, f: &Section) -> Result<Section, MollerError> {
        self.section(f, |u| self.apply_inverse_adjoint_raw(u))
    }

    /// The inverse map, itself a Møller operator from `g'` to `g`.
    pub fn inverse(&self) -> Self {
        let volume_ratio = self.volume_ratio.map(Range::Positive, |c| 1.0 / c).expect("positive ratio");
        Self {
            source: self.target.clone(),
            target: self.source.clone(),
            forward: self.backward.clone(),
            backward: self.forward.clone(),
            volume_ratio,
            links: self
                .links
                .iter()
                .rev()
                .map(|l| match l {
                    LinkRealization::Forward => LinkRealization::Inverted,
                    LinkRealization::Inverted => LinkRealization::Forward,
                    LinkRealization::Identity => LinkRealization::Identity,
                })
                .collect(),
            parts: self.parts.iter().rev().cloned().collect(),
        }
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &Self) -> Result<Self, MollerError> {
        if *self.target != *next.source {
            return Err(MollerError::CompositionMismatch);
        }
        let volume_ratio = self.volume_ratio.zip_with(&next.volume_ratio, Range::Positive, |a, b| a * b)?;
        Ok(Self {
            source: self.source.clone(),
            target: next.target.clone(),
            forward: self.forward.iter().chain(&next.forward).cloned().collect(),
            backward: next.backward.iter().chain(&self.backward).cloned().collect(),
            volume_ratio,
            links: self.links.iter().chain(&next.links).copied().collect(),
            parts: self.parts.iter().chain(&next.parts).cloned().collect(),
        })
    }

    pub fn to_dense(&self) -> Result<DMatrix<f64>, MollerError> {
        dense_of(self.len(), |u| self.apply_raw(u))
    }

    pub fn inverse_dense(&self) -> Result<DMatrix<f64>, MollerError> {
        dense_of(self.len(), |u| self.apply_inverse_raw(u))
    }
}

/// `R = R_{N−1} ∘ ⋯ ∘ R_0` along a chain, one operator per chain metric,
/// with the default profile on every link.
pub fn compose_chain(chain: &ParacausalChain, operators: &[HyperbolicOperator]) -> Result<MollerOperator, MollerError> {
    let chi = default_profile(chain.source().grid())?;
    compose_chain_with(chain, operators, &chi)
}

/// Like [`compose_chain`] with the canonical operator of every metric.
pub fn compose_canonical(chain: &ParacausalChain) -> Result<MollerOperator, MollerError> {
    let ops = chain.metrics().iter().map(canonical_operator).collect::<Result<Vec<_>, _>>()?;
    compose_chain(chain, &ops)
}

pub fn compose_chain_with(chain: &ParacausalChain, operators: &[HyperbolicOperator], chi: &ScalarField) -> Result<MollerOperator, MollerError> {
    if operators.len() != chain.len() {
        return Err(MollerError::OperatorCount { metrics: chain.len(), operators: operators.len() });
    }
    for (index, (op, metric)) in operators.iter().zip(chain.metrics()).enumerate() {
        if op.metric() != metric {
            return Err(MollerError::OperatorMetric { index });
        }
        if !op.is_self_adjoint() {
            return Err(MollerError::NotSelfAdjoint { index });
        }
    }
    let mut out = MollerOperator::identity(&operators[0])?;
    for (k, dir) in chain.links().iter().enumerate() {
        let (a, b) = (&operators[k], &operators[k + 1]);
        let step = if a == b {
            let mut id = MollerOperator::identity(a)?;
            id.links.push(LinkRealization::Identity);
            id
        } else {
            match dir {
                LinkDirection::Forward => MollerOperator::from_link(MollerLink::new(a, b, chi)?)?,
                LinkDirection::Backward => MollerOperator::from_link(MollerLink::new(b, a, chi)?)?.inverse(),
            }
        };
        out = out.then(&step)?;
    }
    Ok(out)
}
