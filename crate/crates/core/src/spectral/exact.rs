//! Exact-arithmetic eigenvalues of integer symmetric matrices.
//!
//! The characteristic polynomial is computed exactly; zero roots are removed
//! by their exact multiplicity; the rest is split into square-free factors
//! (Yun), integer roots are found by direct evaluation, and the remaining
//! irrational roots are isolated with Sturm sequences and refined by dyadic
//! bisection. Every step depends only on the polynomial, so similar matrices
//! (e.g. a relabeled graph) yield bit-identical results.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Largest matrix handled exactly; callers fall back to the dense solver above it.
pub const MAX_EXACT_DIM: usize = 64;

/// Relative width at which bisection stops (2^-60, below f64 resolution).
const REFINE_BITS: u32 = 60;

/// Coefficients of `det(xI - A)`, lowest degree first, or `None` on i128 overflow.
pub fn characteristic_polynomial(a: &[Vec<i64>]) -> Option<Vec<i128>> {
    let n = a.len();
    let mut coeffs = vec![0i128; n + 1];
    coeffs[n] = 1;
    // Faddeev–LeVerrier: M_k = A M_{k-1} + c_{n-k+1} I, c_{n-k} = -tr(A M_k) / k
    let mut m = vec![vec![0i128; n]; n];
    for k in 1..=n {
        let mut next = vec![vec![0i128; n]; n];
        if k > 1 {
            for (i, row) in next.iter_mut().enumerate() {
                for (l, &ail) in a[i].iter().enumerate() {
                    if ail == 0 {
                        continue;
                    }
                    let ail = ail as i128;
                    for (j, x) in row.iter_mut().enumerate() {
                        *x = x.checked_add(ail.checked_mul(m[l][j])?)?;
                    }
                }
            }
        }
        for (i, row) in next.iter_mut().enumerate() {
            row[i] = row[i].checked_add(coeffs[n - k + 1])?;
        }
        let mut trace = 0i128;
        for i in 0..n {
            for (l, &ail) in a[i].iter().enumerate() {
                trace = trace.checked_add((ail as i128).checked_mul(next[l][i])?)?;
            }
        }
        debug_assert_eq!(trace % k as i128, 0);
        coeffs[n - k] = -(trace / k as i128);
        m = next;
    }
    Some(coeffs)
}

/// Eigenvalues of an integer symmetric matrix whose spectrum lies in
/// `[0, bound]`, excluding every zero eigenvalue. Returns `None` when the
/// exact route cannot be used (overflow or size).
pub fn nonzero_eigenvalues(a: &[Vec<i64>], bound: u64) -> Option<Vec<f64>> {
    if a.len() > MAX_EXACT_DIM {
        return None;
    }
    let coeffs = characteristic_polynomial(a)?;
    let zeros = coeffs.iter().take_while(|c| **c == 0).count();
    let q: Poly = coeffs[zeros..].iter().map(|&c| BigRational::from_integer(BigInt::from(c))).collect();
    let degree = q.len() - 1;
    if degree == 0 {
        return Some(Vec::new());
    }
    let mut roots = Vec::with_capacity(degree);
    for (factor, multiplicity) in square_free(&q) {
        let found = real_roots(&to_integer(&factor), bound)?;
        for r in found {
            roots.extend(std::iter::repeat_n(r, multiplicity));
        }
    }
    if roots.len() != degree {
        return None;
    }
    roots.sort_by(f64::total_cmp);
    Some(roots)
}

type Poly = Vec<BigRational>;

fn trim(mut p: Poly) -> Poly {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    if p.is_empty() {
        p.push(BigRational::zero());
    }
    p
}

fn is_constant(p: &Poly) -> bool {
    p.len() == 1
}

fn derivative(p: &Poly) -> Poly {
    if p.len() == 1 {
        return vec![BigRational::zero()];
    }
    trim(p.iter().enumerate().skip(1).map(|(i, c)| c * BigRational::from_integer(BigInt::from(i))).collect())
}

fn sub(a: &Poly, b: &Poly) -> Poly {
    let n = a.len().max(b.len());
    let zero = BigRational::zero();
    trim((0..n).map(|i| a.get(i).unwrap_or(&zero) - b.get(i).unwrap_or(&zero)).collect())
}

fn divrem(a: &Poly, b: &Poly) -> (Poly, Poly) {
    let lead = b.last().expect("non-empty").clone();
    debug_assert!(!lead.is_zero());
    let mut rem = a.clone();
    if a.len() < b.len() {
        return (vec![BigRational::zero()], rem);
    }
    let mut quot = vec![BigRational::zero(); a.len() - b.len() + 1];
    for shift in (0..quot.len()).rev() {
        let c = &rem[shift + b.len() - 1] / &lead;
        if !c.is_zero() {
            for (i, bi) in b.iter().enumerate() {
                rem[shift + i] -= &c * bi;
            }
        }
        quot[shift] = c;
    }
    rem.truncate(b.len() - 1);
    (trim(quot), trim(rem))
}

fn monic(p: Poly) -> Poly {
    let lead = p.last().expect("non-empty").clone();
    p.into_iter().map(|c| c / &lead).collect()
}

fn gcd(a: &Poly, b: &Poly) -> Poly {
    let (mut x, mut y) = (a.clone(), b.clone());
    while !(is_constant(&y) && y[0].is_zero()) {
        let (_, r) = divrem(&x, &y);
        x = y;
        y = r;
    }
    monic(x)
}

fn exact_div(a: &Poly, b: &Poly) -> Poly {
    let (q, r) = divrem(a, b);
    debug_assert!(is_constant(&r) && r[0].is_zero());
    q
}

/// Yun's square-free decomposition: factors paired with their multiplicity.
fn square_free(p: &Poly) -> Vec<(Poly, usize)> {
    let mut out = Vec::new();
    let dp = derivative(p);
    let a0 = gcd(p, &dp);
    let mut b = exact_div(p, &a0);
    let mut c = exact_div(&dp, &a0);
    let mut d = sub(&c, &derivative(&b));
    let mut i = 1;
    while !is_constant(&b) {
        let a = gcd(&b, &d);
        if !is_constant(&a) {
            out.push((a.clone(), i));
        }
        b = exact_div(&b, &a);
        c = exact_div(&d, &a);
        d = sub(&c, &derivative(&b));
        i += 1;
    }
    out
}

/// Clears denominators with a positive factor, so signs are preserved.
fn to_integer(p: &Poly) -> Vec<BigInt> {
    let l = p.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    p.iter().map(|c| (c * BigRational::from_integer(l.clone())).to_integer()).collect()
}

/// `sign(p(num / 2^k))` via homogenized Horner evaluation.
fn sign_at(p: &[BigInt], num: &BigInt, k: u32) -> i8 {
    let d = p.len() - 1;
    let mut acc = p[d].clone();
    for j in (0..d).rev() {
        acc = acc * num + (&p[j] << (k as usize * (d - j)));
    }
    sign(&acc)
}

fn sign(x: &BigInt) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

fn eval_integer(p: &[BigInt], x: &BigInt) -> BigInt {
    p.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
}

/// Divides by `(x - r)`; `r` must be a root.
fn deflate(p: &[BigInt], r: &BigInt) -> Vec<BigInt> {
    let d = p.len() - 1;
    let mut q = vec![BigInt::zero(); d];
    let mut carry = BigInt::zero();
    for i in (0..d).rev() {
        carry = &p[i + 1] + r * &carry;
        q[i] = carry.clone();
    }
    debug_assert!((&p[0] + r * &carry).is_zero());
    q
}

/// Sturm chain of a square-free polynomial, each member scaled to integers.
fn sturm_chain(p: &[BigInt]) -> Vec<Vec<BigInt>> {
    let as_poly = |v: &[BigInt]| -> Poly { v.iter().map(|c| BigRational::from_integer(c.clone())).collect() };
    let mut chain: Vec<Poly> = vec![as_poly(p)];
    chain.push(derivative(&chain[0]));
    while !is_constant(chain.last().expect("non-empty")) {
        let k = chain.len();
        let (_, r) = divrem(&chain[k - 2], &chain[k - 1]);
        let neg: Poly = r.into_iter().map(|c| -c).collect();
        if is_constant(&neg) && neg[0].is_zero() {
            break;
        }
        chain.push(neg);
    }
    chain.iter().map(to_integer).collect()
}

fn sign_changes(chain: &[Vec<BigInt>], num: &BigInt, k: u32) -> usize {
    let mut changes = 0;
    let mut last = 0i8;
    for p in chain {
        let s = sign_at(p, num, k);
        if s != 0 {
            if last != 0 && s != last {
                changes += 1;
            }
            last = s;
        }
    }
    changes
}

/// Real roots in `(0, bound]` of a square-free integer polynomial whose roots
/// are all real and positive. `None` if the root count comes out wrong.
fn real_roots(p: &[BigInt], bound: u64) -> Option<Vec<f64>> {
    let mut p = p.to_vec();
    let expected = p.len() - 1;
    let mut roots = Vec::with_capacity(expected);

    // Rational roots of a monic integer polynomial are integers.
    for r in 1..=bound {
        if p.len() == 1 {
            break;
        }
        let r = BigInt::from(r);
        if eval_integer(&p, &r).is_zero() {
            p = deflate(&p, &r);
            roots.push(r.to_f64().expect("small integer"));
        }
    }
    if p.len() > 1 {
        // Remaining roots are irrational, so no dyadic point is ever a root.
        let chain = sturm_chain(&p);
        let hi = BigInt::from(bound + 1);
        let mut stack = vec![(BigInt::zero(), hi, 0u32)];
        while let Some((a, b, k)) = stack.pop() {
            let count = sign_changes(&chain, &a, k).checked_sub(sign_changes(&chain, &b, k))?;
            match count {
                0 => {}
                1 => roots.push(refine(&p, a, b, k)),
                _ => {
                    let (a, b) = (a << 1usize, b << 1usize);
                    let mid = (&a + &b) >> 1usize;
                    if k > 2000 {
                        return None;
                    }
                    stack.push((a, mid.clone(), k + 1));
                    stack.push((mid, b, k + 1));
                }
            }
        }
    }
    (roots.len() == expected).then_some(roots)
}

/// Bisects `(a, b) / 2^k`, known to hold exactly one simple irrational root.
fn refine(p: &[BigInt], mut a: BigInt, mut b: BigInt, mut k: u32) -> f64 {
    let sb = sign_at(p, &b, k);
    debug_assert_ne!(sb, 0);
    loop {
        let width = &b - &a;
        if a.is_positive() && (&width << REFINE_BITS as usize) <= a {
            break;
        }
        if k > 4000 {
            break;
        }
        a <<= 1usize;
        b <<= 1usize;
        k += 1;
        let mid = (&a + &b) >> 1usize;
        if sign_at(p, &mid, k) == sb {
            b = mid;
        } else {
            a = mid;
        }
    }
    let mid = &a + &b;
    let x = mid.to_f64().expect("finite");
    x * 2f64.powi(-(k as i32) - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle4() -> Vec<Vec<i64>> {
        vec![vec![2, -1, -1, 0], vec![-1, 2, 0, -1], vec![-1, 0, 2, -1], vec![0, -1, -1, 2]]
    }

    #[test]
    fn charpoly_of_cycle() {
        // x (x-2)^2 (x-4) = x^4 - 8x^3 + 20x^2 - 16x
        assert_eq!(characteristic_polynomial(&cycle4()).unwrap(), vec![0, -16, 20, -8, 1]);
    }

    #[test]
    fn integer_spectra_are_exact() {
        assert_eq!(nonzero_eigenvalues(&cycle4(), 4).unwrap(), vec![2.0, 2.0, 4.0]);
        let star = vec![vec![3, -1, -1, -1], vec![-1, 1, 0, 0], vec![-1, 0, 1, 0], vec![-1, 0, 0, 1]];
        assert_eq!(nonzero_eigenvalues(&star, 4).unwrap(), vec![1.0, 1.0, 4.0]);
        assert_eq!(nonzero_eigenvalues(&[vec![0]], 1).unwrap(), Vec::<f64>::new());
        assert_eq!(nonzero_eigenvalues(&[vec![1, -1], vec![-1, 1]], 2).unwrap(), vec![2.0]);
    }

    #[test]
    fn irrational_roots_of_path() {
        let p4 = vec![vec![1, -1, 0, 0], vec![-1, 2, -1, 0], vec![0, -1, 2, -1], vec![0, 0, -1, 1]];
        let r = nonzero_eigenvalues(&p4, 4).unwrap();
        let s = std::f64::consts::SQRT_2;
        let want = [2.0 - s, 2.0, 2.0 + s];
        for (x, y) in r.iter().zip(want) {
            assert!((x - y).abs() < 1e-15, "{r:?}");
        }
    }

    #[test]
    fn square_free_splits_multiplicities() {
        // (x-1)^2 (x-3)
        let p: Poly = [-3, 7, -5, 1].iter().map(|&c| BigRational::from_integer(BigInt::from(c))).collect();
        let f = square_free(&p);
        assert_eq!(f.len(), 2);
        assert_eq!(f[0].1, 1);
        assert_eq!(f[1].1, 2);
    }
}
