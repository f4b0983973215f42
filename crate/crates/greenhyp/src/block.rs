//! Small dense `r×r` blocks stored row-major in `f64` slices.

use nalgebra::DMatrix;

/// `out += s·M·v`.
#[inline]
pub fn mul_add(out: &mut [f64], m: &[f64], v: &[f64], s: f64) {
    let r = out.len();
    if r == 1 {
        out[0] += s * m[0] * v[0];
        return;
    }
    for a in 0..r {
        let row = &m[a * r..(a + 1) * r];
        out[a] += s * row.iter().zip(v).map(|(x, y)| x * y).sum::<f64>();
    }
}

/// `out += s·Mᵀ·v`.
#[inline]
pub fn mul_t_add(out: &mut [f64], m: &[f64], v: &[f64], s: f64) {
    let r = out.len();
    if r == 1 {
        out[0] += s * m[0] * v[0];
        return;
    }
    for a in 0..r {
        for b in 0..r {
            out[b] += s * m[a * r + b] * v[a];
        }
    }
}

pub fn identity(r: usize) -> Vec<f64> {
    let mut m = vec![0.0; r * r];
    for a in 0..r {
        m[a * r + a] = 1.0;
    }
    m
}

pub fn transpose(m: &[f64], r: usize) -> Vec<f64> {
    let mut t = vec![0.0; r * r];
    for a in 0..r {
        for b in 0..r {
            t[b * r + a] = m[a * r + b];
        }
    }
    t
}

pub fn matmul(a: &[f64], b: &[f64], r: usize) -> Vec<f64> {
    let mut c = vec![0.0; r * r];
    for i in 0..r {
        for k in 0..r {
            let x = a[i * r + k];
            for j in 0..r {
                c[i * r + j] += x * b[k * r + j];
            }
        }
    }
    c
}

pub fn inverse(m: &[f64], r: usize) -> Option<Vec<f64>> {
    if r == 1 {
        return (m[0] != 0.0 && m[0].is_finite()).then(|| vec![1.0 / m[0]]);
    }
    let inv = DMatrix::from_row_slice(r, r, m).try_inverse()?;
    Some(inv.transpose().as_slice().to_vec())
}

pub fn from_dmatrix(m: &DMatrix<f64>) -> Vec<f64> {
    m.transpose().as_slice().to_vec()
}

pub fn max_abs(m: &[f64]) -> f64 {
    m.iter().fold(0.0, |a, b| a.max(b.abs()))
}
