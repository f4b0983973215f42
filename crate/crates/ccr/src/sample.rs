use num_complex::Complex64;
use rand::Rng;

use crate::algebra::AlgebraElement;

/// `terms` random normal-ordered words of length at most `max_degree` in
/// `generators` generators, with coefficients uniform in the unit square.
pub fn random_element<R: Rng + ?Sized>(rng: &mut R, generators: usize, max_degree: usize, terms: usize) -> AlgebraElement {
    let mut out = AlgebraElement::zero();
    for _ in 0..terms {
        let len = rng.random_range(0..=max_degree);
        let mut word: Vec<usize> = (0..len).map(|_| rng.random_range(0..generators)).collect();
        word.sort_unstable();
        let c = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        out = &out + &AlgebraElement::monomial(word, c);
    }
    out
}

/// Hermitian `W = λ𝕀 + iG/2` with `λ` above the spectral radius of `G/2`,
/// a valid two-point table for any antisymmetric `G`.
pub fn dominated_table(g: &nalgebra::DMatrix<f64>, margin: f64) -> nalgebra::DMatrix<Complex64> {
    let lambda = 0.5 * g.row_iter().map(|r| r.iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max) + margin;
    nalgebra::DMatrix::from_fn(g.nrows(), g.ncols(), |i, j| {
        Complex64::new(if i == j { lambda } else { 0.0 }, 0.5 * g[(i, j)])
    })
}
