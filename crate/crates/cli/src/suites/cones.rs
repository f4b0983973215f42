use moellerlab_geometry::{convex_combination, preceq, sharp_interpolation, GeometryError, MetricField, Precedence};
use moellerlab_lattice::{make_grid, smooth_step, Range, ScalarField};

use super::stream;
use crate::context::Context;
use crate::report::{Identity, SuiteReport};
use crate::sample::comparable_pair;

type Blend = fn(&MetricField, &MetricField, &ScalarField) -> Result<MetricField, GeometryError>;

const BLENDS: [(&str, Blend); 2] = [("convex", convex_combination), ("sharp", sharp_interpolation)];

pub fn run(ctx: &Context, report: &mut SuiteReport) -> anyhow::Result<()> {
    let spec = &ctx.scenario.cones;
    let grid = make_grid(spec.nt, spec.nx, 0.0, 1.0, 1.0, 1)?;
    let profiles = [
        ScalarField::constant(&grid, 0.0, Range::Unit)?,
        ScalarField::constant(&grid, 0.5, Range::Unit)?,
        ScalarField::constant(&grid, 1.0, Range::Unit)?,
        smooth_step(&grid, 0.25, 0.75)?,
        ScalarField::from_fn(&grid, Range::Unit, |_, x| 0.5 + 0.5 * (2.0 * std::f64::consts::PI * x).sin())?,
    ];
    let mut rng = ctx.rng(stream::CONES);
    let mut lorentzian = [0usize; 2];
    let mut below = [0usize; 2];
    let mut above = [0usize; 2];
    for _ in 0..spec.pairs {
        let (g, g2) = comparable_pair(&grid, &mut rng)?;
        for chi in &profiles {
            for (k, (_, blend)) in BLENDS.iter().enumerate() {
                let b = blend(&g, &g2, chi)?;
                lorentzian[k] += b.components().iter().filter(|m| !(m.det() < 0.0)).count();
                below[k] += usize::from(preceq(&g, &b)? != Precedence::Aligned);
                above[k] += usize::from(preceq(&b, &g2)? != Precedence::Aligned);
            }
        }
    }
    for (k, (name, _)) in BLENDS.iter().enumerate() {
        report.push(Identity::at_most(
            format!("{name} blend: points with det >= 0"),
            "a blend of comparable Lorentzian metrics is Lorentzian",
            lorentzian[k] as f64,
            0.0,
        ));
        report.push(Identity::at_most(
            format!("{name} blend: pairs with g not below blend"),
            "the cones of g lie inside the cones of the blend, futures aligned",
            below[k] as f64,
            0.0,
        ));
        report.push(Identity::at_most(
            format!("{name} blend: pairs with blend not below g'"),
            "the cones of the blend lie inside the cones of g', futures aligned",
            above[k] as f64,
            0.0,
        ));
    }
    report.note(format!(
        "{} comparable pairs, {} cutoff profiles, {}x{} patch, exact interval comparisons",
        spec.pairs,
        profiles.len(),
        spec.nt,
        spec.nx
    ));
    Ok(())
}
