//! Householder tridiagonalization followed by implicit-shift QL.

use super::{Spectrum, SpectrumMeta, SymmetricMatrix};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 60;

/// All eigenvalues of a symmetric matrix, ascending.
///
/// Off-diagonal entries are deflated once they drop below
/// `tol * (|d_i| + |d_{i+1}|)`; `tol` is clamped to at least machine epsilon.
pub fn eigenvalues_full(m: &SymmetricMatrix, tol: f64) -> Result<Spectrum> {
    let n = m.dim();
    if n == 0 {
        return Ok(Spectrum::new(Vec::new(), SpectrumMeta::Dense));
    }
    let mut a = m.to_dense();
    let (mut d, mut e) = tridiagonalize(&mut a);
    tql(&mut d, &mut e, tol.max(f64::EPSILON)).map_err(|iterations| Error::NonConvergence { size: n, iterations })?;
    d.sort_by(f64::total_cmp);
    Ok(Spectrum::new(d, SpectrumMeta::Dense))
}

/// Reduces `a` in place; returns the diagonal and sub-diagonal (`e[0] = 0`).
fn tridiagonalize(a: &mut [Vec<f64>]) -> (Vec<f64>, Vec<f64>) {
    let n = a.len();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = 0.0;
        if l > 0 {
            let scale: f64 = a[i][..=l].iter().map(|x| x.abs()).sum();
            if scale == 0.0 {
                e[i] = a[i][l];
            } else {
                for k in 0..=l {
                    a[i][k] /= scale;
                    h += a[i][k] * a[i][k];
                }
                let f = a[i][l];
                let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h -= f * g;
                a[i][l] = f - g;
                let mut f = 0.0;
                for j in 0..=l {
                    let mut g = 0.0;
                    for k in 0..=j {
                        g += a[j][k] * a[i][k];
                    }
                    for k in j + 1..=l {
                        g += a[k][j] * a[i][k];
                    }
                    e[j] = g / h;
                    f += e[j] * a[i][j];
                }
                let hh = f / (h + h);
                for j in 0..=l {
                    let f = a[i][j];
                    let g = e[j] - hh * f;
                    e[j] = g;
                    for k in 0..=j {
                        a[j][k] -= f * e[k] + g * a[i][k];
                    }
                }
            }
        } else {
            e[i] = a[i][l];
        }
        d[i] = h;
    }
    for (i, di) in d.iter_mut().enumerate() {
        *di = a[i][i];
    }
    (d, e)
}

/// Implicit QL with Wilkinson-style shifts on a symmetric tridiagonal matrix.
/// On failure returns the number of sweeps spent on the stuck eigenvalue.
fn tql(d: &mut [f64], e: &mut [f64], tol: f64) -> std::result::Result<(), usize> {
    let n = d.len();
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;

    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= tol * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            if iter == MAX_SWEEPS {
                return Err(iter);
            }
            iter += 1;

            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(got: &[f64], want: &[f64], tol: f64) {
        assert_eq!(got.len(), want.len(), "{got:?} vs {want:?}");
        for (g, w) in got.iter().zip(want) {
            assert!((g - w).abs() <= tol, "{got:?} vs {want:?}");
        }
    }

    #[test]
    fn small_known_spectra() {
        let c4 = SymmetricMatrix::from_rows(&[
            vec![2.0, -1.0, -1.0, 0.0],
            vec![-1.0, 2.0, 0.0, -1.0],
            vec![-1.0, 0.0, 2.0, -1.0],
            vec![0.0, -1.0, -1.0, 2.0],
        ]);
        assert_close(&eigenvalues_full(&c4, 0.0).unwrap().values, &[0.0, 2.0, 2.0, 4.0], 1e-10);

        let star = SymmetricMatrix::from_rows(&[
            vec![3.0, -1.0, -1.0, -1.0],
            vec![-1.0, 1.0, 0.0, 0.0],
            vec![-1.0, 0.0, 1.0, 0.0],
            vec![-1.0, 0.0, 0.0, 1.0],
        ]);
        assert_close(&eigenvalues_full(&star, 0.0).unwrap().values, &[0.0, 1.0, 1.0, 4.0], 1e-10);

        let zero = SymmetricMatrix::zeros(3);
        assert_eq!(eigenvalues_full(&zero, 0.0).unwrap().values, vec![0.0; 3]);
        assert!(eigenvalues_full(&SymmetricMatrix::zeros(0), 0.0).unwrap().values.is_empty());
    }

    #[test]
    fn diagonal_and_one_by_one() {
        let mut m = SymmetricMatrix::zeros(3);
        m.set(0, 0, 5.0);
        m.set(1, 1, -2.0);
        m.set(2, 2, 1.0);
        assert_close(&eigenvalues_full(&m, 0.0).unwrap().values, &[-2.0, 1.0, 5.0], 1e-14);
        let mut one = SymmetricMatrix::zeros(1);
        one.set(0, 0, 7.5);
        assert_eq!(eigenvalues_full(&one, 0.0).unwrap().values, vec![7.5]);
    }
}
