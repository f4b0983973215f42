//! Truncated Fock representation of `D ≤ 4` generators with a given
//! commutator table: `Φ_i = Σ_k (c_ik a_k + c̄_ik a_k†)` where
//! `C C* = λ𝕀 + iG/2`, so that `[Φ_i, Φ_j] = iG_ij`.

use moellerlab_ccr::{AlgebraElement, PairingTable};
use nalgebra::{Cholesky, DMatrix};
use num_complex::Complex64;

pub const CUTOFF: usize = 6;

pub struct Fock {
    modes: usize,
    coeffs: DMatrix<Complex64>,
}

impl Fock {
    pub fn new(table: &PairingTable) -> Self {
        let d = table.len();
        assert!(d <= 4);
        let g = table.matrix();
        let lambda = g.amax() * d as f64 + 1.0;
        let h = DMatrix::from_fn(d, d, |i, j| Complex64::new(if i == j { lambda } else { 0.0 }, 0.5 * g[(i, j)]));
        let l = Cholesky::new(h).expect("positive definite").l();
        Self { modes: d, coeffs: l }
    }

    pub fn dim(&self) -> usize {
        (CUTOFF + 1).pow(self.modes as u32)
    }

    fn occupation(&self, state: usize, k: usize) -> usize {
        (state / (CUTOFF + 1).pow(k as u32)) % (CUTOFF + 1)
    }

    /// Basis vector of the given occupation numbers.
    pub fn basis(&self, occupations: &[usize]) -> Vec<Complex64> {
        let mut v = vec![Complex64::new(0.0, 0.0); self.dim()];
        let idx = occupations.iter().enumerate().map(|(k, &n)| n * (CUTOFF + 1).pow(k as u32)).sum::<usize>();
        v[idx] = Complex64::new(1.0, 0.0);
        v
    }

    fn field(&self, i: usize, v: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); v.len()];
        for (s, &x) in v.iter().enumerate() {
            if x == Complex64::new(0.0, 0.0) {
                continue;
            }
            for k in 0..self.modes {
                let n = self.occupation(s, k);
                let stride = (CUTOFF + 1).pow(k as u32);
                let c = self.coeffs[(i, k)];
                if n > 0 {
                    out[s - stride] += c * (n as f64).sqrt() * x;
                }
                if n < CUTOFF {
                    out[s + stride] += c.conj() * ((n + 1) as f64).sqrt() * x;
                }
            }
        }
        out
    }

    /// `a v` for an element written in words.
    pub fn apply(&self, a: &AlgebraElement, v: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); v.len()];
        for (w, c) in a.terms() {
            let mut u = v.to_vec();
            for &i in w.iter().rev() {
                u = self.field(i, &u);
            }
            for (o, x) in out.iter_mut().zip(&u) {
                *o += c * x;
            }
        }
        out
    }
}

pub fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).norm()))
}
