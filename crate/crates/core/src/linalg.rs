//! Dense exact linear algebra over Q.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{rat, Rat};

pub type RatMatrix = Vec<Vec<Rat>>;

pub fn zeros(rows: usize, cols: usize) -> RatMatrix {
    vec![vec![Rat::zero(); cols]; rows]
}

pub fn identity(n: usize) -> RatMatrix {
    let mut m = zeros(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Rat::one();
    }
    m
}

pub fn from_ints(rows: &[Vec<i64>]) -> RatMatrix {
    rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect()
}

pub fn mul(a: &RatMatrix, b: &RatMatrix) -> RatMatrix {
    let n = a.len();
    let k = b.len();
    let m = if k == 0 { 0 } else { b[0].len() };
    let mut out = zeros(n, m);
    for i in 0..n {
        for t in 0..k {
            let x = &a[i][t];
            if x.is_zero() {
                continue;
            }
            for j in 0..m {
                if !b[t][j].is_zero() {
                    out[i][j] += x * &b[t][j];
                }
            }
        }
    }
    out
}

pub fn vec_mat(v: &[Rat], m: &RatMatrix) -> Vec<Rat> {
    let cols = if m.is_empty() { 0 } else { m[0].len() };
    (0..cols).map(|j| v.iter().zip(m).map(|(x, row)| x * &row[j]).sum()).collect()
}

pub fn transpose(a: &RatMatrix) -> RatMatrix {
    if a.is_empty() {
        return Vec::new();
    }
    (0..a[0].len()).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
}

/// Row echelon form in place; returns the pivot columns and the sign of the permutation.
fn echelon(m: &mut RatMatrix) -> (Vec<usize>, bool) {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut pivots = Vec::new();
    let mut neg = false;
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        if p != r {
            m.swap(p, r);
            neg = !neg;
        }
        let inv = Rat::one() / &m[r][c];
        for i in r + 1..rows {
            if m[i][c].is_zero() {
                continue;
            }
            let factor = &m[i][c] * &inv;
            for j in c..cols {
                let t = &factor * &m[r][j];
                m[i][j] -= t;
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    (pivots, neg)
}

pub fn det(a: &RatMatrix) -> Rat {
    let n = a.len();
    let mut m = a.clone();
    let (piv, neg) = echelon(&mut m);
    if piv.len() < n {
        return Rat::zero();
    }
    let mut d = Rat::one();
    for (i, row) in m.iter().enumerate() {
        d *= &row[i];
    }
    if neg {
        -d
    } else {
        d
    }
}

pub fn rank(a: &RatMatrix) -> usize {
    let mut m = a.clone();
    echelon(&mut m).0.len()
}

pub fn inverse(a: &RatMatrix) -> Result<RatMatrix> {
    let n = a.len();
    let mut aug: RatMatrix = a
        .iter()
        .zip(identity(n))
        .map(|(r, i)| r.iter().cloned().chain(i).collect())
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !aug[i][c].is_zero()).ok_or(Error::NotInvertible)?;
        aug.swap(p, c);
        let inv = Rat::one() / &aug[c][c];
        for x in aug[c].iter_mut() {
            *x *= &inv;
        }
        for i in 0..n {
            if i != c && !aug[i][c].is_zero() {
                let factor = aug[i][c].clone();
                for j in 0..2 * n {
                    let t = &factor * &aug[c][j];
                    aug[i][j] -= t;
                }
            }
        }
    }
    Ok(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Solves the row-vector system `x · a = b`.
pub fn solve_left(a: &RatMatrix, b: &[Rat]) -> Result<Vec<Rat>> {
    Ok(vec_mat(b, &inverse(a)?))
}

/// Characteristic polynomial det(xI - a), little-endian, by Faddeev-LeVerrier.
pub fn char_poly(a: &RatMatrix) -> Vec<Rat> {
    let n = a.len();
    let mut coeffs = vec![Rat::zero(); n + 1];
    coeffs[n] = Rat::one();
    let mut m = zeros(n, n);
    for k in 1..=n {
        // M_k = A M_(k-1) + c_(n-k+1) I
        let mut next = mul(a, &m);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += &coeffs[n - k + 1];
        }
        m = next;
        let am = mul(a, &m);
        let tr: Rat = (0..n).map(|i| am[i][i].clone()).sum();
        coeffs[n - k] = -tr / rat(k as i64);
    }
    coeffs
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det_inverse_charpoly() {
        let a = from_ints(&[vec![2, 1, 0], vec![1, 3, 1], vec![0, 1, 4]]);
        assert_eq!(det(&a), rat(18));
        let inv = inverse(&a).unwrap();
        assert_eq!(mul(&a, &inv), identity(3));
        // x^3 - 9x^2 + 24x - 18
        assert_eq!(char_poly(&a), vec![rat(-18), rat(24), rat(-9), rat(1)]);
        let s = from_ints(&[vec![1, 2], vec![2, 4]]);
        assert_eq!(rank(&s), 1);
        assert_eq!(det(&s), rat(0));
        assert_eq!(inverse(&s), Err(Error::NotInvertible));
        let x = solve_left(&a, &[rat(1), rat(2), rat(3)]).unwrap();
        assert_eq!(vec_mat(&x, &a), vec![rat(1), rat(2), rat(3)]);
    }
}
