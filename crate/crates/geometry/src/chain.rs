use std::f64::consts::PI;

use serde::Serialize;

use crate::causal::closed_causal_exists;
use crate::order::{preceq, Precedence};
use crate::tensor::{wrap_angle, Arc, SymTensor2, TangentVector};
use crate::witness::{cones_intersect_future, paracausal_witness};
use crate::{GeometryError, MetricField};

/// Direction of inclusion between consecutive chain metrics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LinkDirection {
    /// `g_k ⪯ g_{k+1}`.
    Forward,
    /// `g_{k+1} ⪯ g_k`.
    Backward,
}

/// Which construction produced a chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ChainStrategy {
    Direct,
    Witness,
    SharedTime,
    Widening,
}

/// Metrics `g_0, …, g_N` whose consecutive members are future-aligned
/// comparable in the recorded direction.
#[derive(Debug, Clone)]
pub struct ParacausalChain {
    metrics: Vec<MetricField>,
    links: Vec<LinkDirection>,
}

impl ParacausalChain {
    pub fn new(metrics: Vec<MetricField>, links: Vec<LinkDirection>) -> Result<Self, GeometryError> {
        if metrics.len() < 2 || links.len() + 1 != metrics.len() {
            return Err(GeometryError::ChainShape { metrics: metrics.len(), links: links.len() });
        }
        for (k, dir) in links.iter().enumerate() {
            let (a, b) = match dir {
                LinkDirection::Forward => (&metrics[k], &metrics[k + 1]),
                LinkDirection::Backward => (&metrics[k + 1], &metrics[k]),
            };
            if preceq(a, b)? != Precedence::Aligned {
                return Err(GeometryError::BrokenLink { link: k });
            }
        }
        Ok(Self { metrics, links })
    }

    pub fn metrics(&self) -> &[MetricField] {
        &self.metrics
    }

    pub fn links(&self) -> &[LinkDirection] {
        &self.links
    }

    pub fn len(&self) -> usize {
        self.metrics.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn source(&self) -> &MetricField {
        &self.metrics[0]
    }

    pub fn target(&self) -> &MetricField {
        &self.metrics[self.metrics.len() - 1]
    }

    /// Same metrics in the opposite order.
    pub fn reversed(&self) -> Self {
        let metrics = self.metrics.iter().rev().cloned().collect();
        let links = self
            .links
            .iter()
            .rev()
            .map(|d| match d {
                LinkDirection::Forward => LinkDirection::Backward,
                LinkDirection::Backward => LinkDirection::Forward,
            })
            .collect();
        Self { metrics, links }
    }
}

/// Evidence that two metrics carry opposite time orientations on
/// identical or nested cones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ReversalCertificate {
    /// Number of lattice points checked, all reversed.
    pub points: usize,
    /// Whether rotating the cones through the spatial axis, the naive way
    /// to connect the two orientations, produces a closed causal curve.
    pub rotation_has_closed_causal_curve: bool,
}

#[derive(Debug, Clone)]
pub enum ChainSearch {
    Found { chain: ParacausalChain, strategy: ChainStrategy },
    OrientationReversed(ReversalCertificate),
    NotFound,
}

impl ChainSearch {
    pub fn chain(&self) -> Option<&ParacausalChain> {
        match self {
            ChainSearch::Found { chain, .. } => Some(chain),
            _ => None,
        }
    }
}

fn direct(g: &MetricField, g2: &MetricField) -> Result<Option<ParacausalChain>, GeometryError> {
    let dir = if preceq(g, g2)? == Precedence::Aligned {
        LinkDirection::Forward
    } else if preceq(g2, g)? == Precedence::Aligned {
        LinkDirection::Backward
    } else {
        return Ok(None);
    };
    Ok(Some(ParacausalChain::new(vec![g.clone(), g2.clone()], vec![dir])?))
}

fn via_witness(g: &MetricField, g2: &MetricField) -> Result<Option<ParacausalChain>, GeometryError> {
    let Some(h) = paracausal_witness(g, g2)? else {
        return Ok(None);
    };
    let links = vec![LinkDirection::Backward, LinkDirection::Forward];
    Ok(ParacausalChain::new(vec![g.clone(), h, g2.clone()], links).ok())
}

fn future_in_plus_t(g: &MetricField) -> bool {
    g.orientation().iter().all(|x| x.t > 0.0)
}

/// Ultrastatic `−dt² + λ dx²` with cones wide enough to contain both.
fn via_shared_time(g: &MetricField, g2: &MetricField) -> Result<Option<ParacausalChain>, GeometryError> {
    if !(g.slices_spacelike() && g2.slices_spacelike() && future_in_plus_t(g) && future_in_plus_t(g2)) {
        return Ok(None);
    }
    let s = g.max_abs_slope().max(g2.max_abs_slope());
    if !s.is_finite() || s <= 0.0 {
        return Ok(None);
    }
    let lambda = 0.5 / (s * s);
    let u = MetricField::constant(g.grid(), SymTensor2::new(-1.0, 0.0, lambda), TangentVector::new(1.0, 0.0))?;
    let links = vec![LinkDirection::Forward, LinkDirection::Backward];
    Ok(ParacausalChain::new(vec![g.clone(), u, g2.clone()], links).ok())
}

const WIDEN_REACH: f64 = 0.5;
const WIDEN_MARGIN: f64 = 0.02;

/// A metric whose future arc contains that of `from` and reaches halfway
/// into that of `towards`.
fn widened(from: &MetricField, towards: &MetricField) -> Result<Option<MetricField>, GeometryError> {
    let np = from.grid().points();
    let mut comps = Vec::with_capacity(np);
    let mut orient = Vec::with_capacity(np);
    for p in 0..np {
        let a = from.future_arc(p);
        let b = towards.future_arc(p);
        let d = wrap_angle(b.center - a.center);
        let s = if d >= 0.0 { 1.0 } else { -1.0 };
        let start = a.center - s * (a.half_width + WIDEN_MARGIN);
        let end = a.center + d - s * b.half_width * (1.0 - WIDEN_REACH);
        let width = s * (end - start);
        if !(width > 2.0 * (a.half_width + WIDEN_MARGIN)) || width >= PI - WIDEN_MARGIN {
            return Ok(None);
        }
        let arc = Arc { center: 0.5 * (start + end), half_width: 0.5 * width };
        comps.push(SymTensor2::from_arc(arc));
        orient.push(TangentVector::from_angle(arc.center));
    }
    Ok(Some(MetricField::new(from.grid(), comps, orient)?))
}

fn via_widening(g: &MetricField, g2: &MetricField) -> Result<Option<ParacausalChain>, GeometryError> {
    use LinkDirection::{Backward, Forward};
    if let Some(w) = widened(g, g2)? {
        if let Some(h) = paracausal_witness(&w, g2)? {
            let chain = ParacausalChain::new(vec![g.clone(), w, h, g2.clone()], vec![Forward, Backward, Forward]);
            if let Ok(c) = chain {
                return Ok(Some(c));
            }
        }
    }
    if let Some(w) = widened(g2, g)? {
        if let Some(h) = paracausal_witness(g, &w)? {
            let chain = ParacausalChain::new(vec![g.clone(), h, w, g2.clone()], vec![Backward, Forward, Backward]);
            if let Ok(c) = chain {
                return Ok(Some(c));
            }
        }
    }
    Ok(None)
}

/// The naive intermediate between opposite orientations: cones turned to
/// open around `∂_x`, which on a spatial circle closes causal loops.
pub fn rotation_intermediate(g: &MetricField) -> MetricField {
    let comps = vec![SymTensor2::new(1.0, 0.0, -1.0); g.grid().points()];
    MetricField::new(g.grid(), comps, vec![TangentVector::new(0.0, 1.0); g.grid().points()])
        .expect("rotated minkowski is valid")
}

fn reversal_certificate(g: &MetricField, g2: &MetricField) -> Result<Option<ReversalCertificate>, GeometryError> {
    let reversed = preceq(g, g2)? == Precedence::Reversed || preceq(g2, g)? == Precedence::Reversed;
    if !reversed {
        return Ok(None);
    }
    Ok(Some(ReversalCertificate {
        points: g.grid().points(),
        rotation_has_closed_causal_curve: closed_causal_exists(&rotation_intermediate(g)),
    }))
}

/// Tries, in order: direct comparability, a squeezed witness, an ultrastatic
/// metric sharing the time function, and a single widening step followed by
/// a witness. Failure means no chain was found, not that none exists; a
/// reversed time orientation is reported with a certificate.
pub fn build_chain(g: &MetricField, g2: &MetricField) -> Result<ChainSearch, GeometryError> {
    if !g.same_grid(g2) {
        return Err(GeometryError::GridMismatch);
    }
    type Attempt = fn(&MetricField, &MetricField) -> Result<Option<ParacausalChain>, GeometryError>;
    let attempts: [(ChainStrategy, Attempt); 4] = [
        (ChainStrategy::Direct, direct),
        (ChainStrategy::Witness, via_witness),
        (ChainStrategy::SharedTime, via_shared_time),
        (ChainStrategy::Widening, via_widening),
    ];
    for (strategy, attempt) in attempts {
        if strategy == ChainStrategy::Witness && cones_intersect_future(g, g2)?.is_err() {
            continue;
        }
        if let Some(chain) = attempt(g, g2)? {
            return Ok(ChainSearch::Found { chain, strategy });
        }
    }
    Ok(match reversal_certificate(g, g2)? {
        Some(c) => ChainSearch::OrientationReversed(c),
        None => ChainSearch::NotFound,
    })
}
