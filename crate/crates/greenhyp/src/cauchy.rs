use moellerlab_lattice::Section;

use crate::block;
use crate::green::GreenSystem;
use crate::operator::Neighbor;
use crate::GreenError;

/// Initial data on the slice `n0`: the value `h1` and the normal derivative
/// `h2 = β⁻¹∂_t Ψ`, both given per site as `nx·r` values.
#[derive(Debug, Clone, PartialEq)]
pub struct CauchyData {
    pub level: usize,
    pub value: Vec<f64>,
    pub normal: Vec<f64>,
}

impl GreenSystem {
    /// Solves `N Ψ = f` on all interior rows with `Ψ` and its centred normal
    /// derivative prescribed on an interior slice.
    pub fn solve_cauchy(&self, data: &CauchyData, source: Option<&Section>) -> Result<Section, GreenError> {
        let op = self.operator();
        let g = *op.grid();
        let n0 = data.level;
        if n0 == 0 || n0 + 1 >= g.nt {
            return Err(GreenError::SliceNotInterior { level: n0 });
        }
        let m = g.nx * g.rank;
        if data.value.len() != m || data.normal.len() != m {
            return Err(moellerlab_lattice::LatticeError::ShapeMismatch { expected: m, found: data.value.len().min(data.normal.len()) }.into());
        }
        op.check_cfl()?;
        let f = match source {
            Some(s) if s.grid() != &g => return Err(GreenError::GridMismatch),
            Some(s) => s.values().to_vec(),
            None => vec![0.0; g.len()],
        };
        let lapse = op.metric().orthogonal_split()?.lapse;
        let r = g.rank;
        let mut u = vec![0.0; g.len()];
        u[n0 * m..(n0 + 1) * m].copy_from_slice(&data.value);
        let step: Vec<f64> = (0..m).map(|i| 2.0 * g.dt * lapse.get(n0, i / r) * data.normal[i]).collect();

        // Row n0 with Ψ^{n0+1} = Ψ^{n0−1} + step gives (upper + lower) Ψ^{n0−1}.
        let mut rhs = f[n0 * m..(n0 + 1) * m].to_vec();
        for j in 0..g.nx {
            let p = g.point(n0, j);
            let out = &mut rhs[j * r..(j + 1) * r];
            for (k, jj) in [(Neighbor::West, g.west(j)), (Neighbor::Center, j), (Neighbor::East, g.east(j))] {
                block::mul_add(out, op.block_at(p, k), &data.value[jj * r..(jj + 1) * r], -1.0);
            }
            block::mul_add(out, op.block_at(p, Neighbor::Upper), &step[j * r..(j + 1) * r], -1.0);
            let sum: Vec<f64> = op.block_at(p, Neighbor::Upper).iter().zip(op.block_at(p, Neighbor::Lower)).map(|(a, b)| a + b).collect();
            let inv = block::inverse(&sum, r).ok_or(GreenError::SingularBlock { n: n0, j })?;
            let below = &mut u[(n0 - 1) * m + j * r..(n0 - 1) * m + (j + 1) * r];
            block::mul_add(below, &inv, out, 1.0);
        }
        for i in 0..m {
            u[(n0 + 1) * m + i] = u[(n0 - 1) * m + i] + step[i];
        }
        if n0 < g.nt - 2 {
            self.march_up(&mut u, &f, n0 + 1, g.nt - 2);
        }
        if n0 >= 2 {
            self.march_down(&mut u, &f, n0 - 1, 1);
        }
        Ok(Section::from_values(&g, u)?)
    }
}
