//! Exact Gaussian elimination over `Q`.

use num_traits::{One, Zero};

use crate::error::LinalgError;
use crate::poly::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalSystem {
    pub matrix: Vec<Vec<Rational>>,
    pub rhs: Vec<Rational>,
    pub columns: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution {
    Unique(Vec<Rational>),
    /// `certificate` is a row combination `y` with `yᵀA = 0` and `yᵀb ≠ 0`.
    Inconsistent {
        certificate: Vec<Rational>,
    },
    /// `particular + span(nullspace)`.
    Underdetermined {
        particular: Vec<Rational>,
        nullspace: Vec<Vec<Rational>>,
    },
}

impl Solution {
    pub fn free_parameters(&self) -> usize {
        match self {
            Solution::Underdetermined { nullspace, .. } => nullspace.len(),
            _ => 0,
        }
    }
}

/// Reduced row echelon form in place; returns the pivot columns. Pivots are
/// taken column by column, choosing the first row with a nonzero entry.
fn rref(rows: &mut [Vec<Rational>], columns: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..columns {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = Rational::one() / &rows[r][c];
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    if !p.is_zero() {
                        *x -= &f * p;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

impl RationalSystem {
    pub fn new(matrix: Vec<Vec<Rational>>, rhs: Vec<Rational>, columns: usize) -> Result<Self, LinalgError> {
        if matrix.len() != rhs.len() {
            return Err(LinalgError::Dimension(format!(
                "{} equations but {} right-hand sides",
                matrix.len(),
                rhs.len()
            )));
        }
        if let Some(row) = matrix.iter().find(|r| r.len() != columns) {
            return Err(LinalgError::Dimension(format!(
                "row of length {} in a system with {columns} unknowns",
                row.len()
            )));
        }
        Ok(RationalSystem { matrix, rhs, columns })
    }

    pub fn solve(&self) -> Solution {
        let m = self.matrix.len();
        let n = self.columns;
        // augmented [A | b | I] so that an inconsistent row carries its certificate
        let mut rows: Vec<Vec<Rational>> = self
            .matrix
            .iter()
            .zip(&self.rhs)
            .enumerate()
            .map(|(i, (row, b))| {
                let mut r = row.clone();
                r.push(b.clone());
                r.extend((0..m).map(|k| if k == i { Rational::one() } else { Rational::zero() }));
                r
            })
            .collect();
        let pivots = rref(&mut rows, n);
        for row in rows.iter().skip(pivots.len()) {
            if !row[n].is_zero() {
                return Solution::Inconsistent { certificate: row[n + 1..].to_vec() };
            }
        }
        let mut particular = vec![Rational::zero(); n];
        for (r, &c) in pivots.iter().enumerate() {
            particular[c] = rows[r][n].clone();
        }
        let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
        if free.is_empty() {
            return Solution::Unique(particular);
        }
        let nullspace = free
            .iter()
            .map(|&f| {
                let mut v = vec![Rational::zero(); n];
                v[f] = Rational::one();
                for (r, &c) in pivots.iter().enumerate() {
                    v[c] = -rows[r][f].clone();
                }
                v
            })
            .collect();
        Solution::Underdetermined { particular, nullspace }
    }
}

pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let columns = rows.first().map_or(0, Vec::len);
    let mut rows = rows.to_vec();
    rref(&mut rows, columns).len()
}

/// A basis of `{v : A v = 0}`.
pub fn nullspace(matrix: &[Vec<Rational>], columns: usize) -> Vec<Vec<Rational>> {
    let system = RationalSystem { matrix: matrix.to_vec(), rhs: vec![Rational::zero(); matrix.len()], columns };
    match system.solve() {
        Solution::Underdetermined { nullspace, .. } => nullspace,
        _ => Vec::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    fn mat(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect()
    }

    fn vecr(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn unique() {
        let s = RationalSystem::new(mat(&[&[1, 0], &[0, 1]]), vecr(&[2, 3]), 2).unwrap();
        assert_eq!(s.solve(), Solution::Unique(vecr(&[2, 3])));
    }

    #[test]
    fn underdetermined() {
        let s = RationalSystem::new(mat(&[&[1, 1]]), vecr(&[1]), 2).unwrap();
        let sol = s.solve();
        assert_eq!(sol.free_parameters(), 1);
        if let Solution::Underdetermined { particular, nullspace } = sol {
            assert_eq!(&particular[0] + &particular[1], rat(1));
            assert_eq!(&nullspace[0][0] + &nullspace[0][1], rat(0));
        }
    }

    #[test]
    fn inconsistent_with_certificate() {
        let a = mat(&[&[1], &[1]]);
        let b = vecr(&[1, 2]);
        let s = RationalSystem::new(a.clone(), b.clone(), 1).unwrap();
        let Solution::Inconsistent { certificate } = s.solve() else { panic!("expected inconsistency") };
        let ya: Rational = certificate.iter().zip(&a).map(|(y, r)| y * &r[0]).sum();
        let yb: Rational = certificate.iter().zip(&b).map(|(y, x)| y * x).sum();
        assert!(ya.is_zero());
        assert!(!yb.is_zero());
    }

    #[test]
    fn dimension_errors() {
        assert!(RationalSystem::new(mat(&[&[1, 2]]), vecr(&[1, 2]), 2).is_err());
        assert!(RationalSystem::new(mat(&[&[1, 2]]), vecr(&[1]), 3).is_err());
    }

    #[test]
    fn rank_and_kernel() {
        let a = mat(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]);
        assert_eq!(rank(&a), 2);
        let ker = nullspace(&a, 3);
        assert_eq!(ker.len(), 1);
        for row in &a {
            let dot: Rational = row.iter().zip(&ker[0]).map(|(x, y)| x * y).sum();
            assert!(dot.is_zero());
        }
    }
}
