//! Dense exact linear algebra over a field: reduced row echelon form, linear
//! solves returning the whole affine solution set, and a prime-field shadow
//! used to pick pivots cheaply before solving over Q(q).

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::qfield::{invmod, RatFunc};

pub trait Field: Clone + PartialEq + std::fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
}

impl Field for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn neg(&self) -> Self {
        -self
    }
}

impl Field for RatFunc {
    fn zero() -> Self {
        RatFunc::zero()
    }
    fn one() -> Self {
        RatFunc::one()
    }
    fn is_zero(&self) -> bool {
        RatFunc::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn neg(&self) -> Self {
        -self
    }
}

/// Prime used for the modular shadow computations.
pub const PRIME: u64 = 2_305_843_009_213_693_951; // 2^61 - 1

/// Element of Z/p for [`PRIME`].
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub struct Fp(pub u64);

impl Fp {
    pub fn new(x: i128) -> Fp {
        Fp(x.rem_euclid(PRIME as i128) as u64)
    }
}

impl Field for Fp {
    fn zero() -> Self {
        Fp(0)
    }
    fn one() -> Self {
        Fp(1)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    fn add(&self, o: &Self) -> Self {
        Fp(((self.0 as u128 + o.0 as u128) % PRIME as u128) as u64)
    }
    fn sub(&self, o: &Self) -> Self {
        Fp(((self.0 as u128 + PRIME as u128 - o.0 as u128) % PRIME as u128) as u64)
    }
    fn mul(&self, o: &Self) -> Self {
        Fp(((self.0 as u128 * o.0 as u128) % PRIME as u128) as u64)
    }
    fn div(&self, o: &Self) -> Self {
        assert!(o.0 != 0, "division by zero in Z/p");
        self.mul(&Fp(invmod(o.0, PRIME)))
    }
    fn neg(&self) -> Self {
        Fp((PRIME - self.0) % PRIME)
    }
}

/// In-place reduced row echelon form; returns pivot columns, one per nonzero row.
/// Zero rows are dropped.
pub fn rref<F: Field>(rows: &mut Vec<Vec<F>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = F::one().div(&rows[r][c]);
        if inv != F::one() {
            for x in rows[r].iter_mut().skip(c) {
                *x = x.mul(&inv);
            }
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row).skip(c) {
                if !y.is_zero() {
                    *x = x.sub(&f.mul(y));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

pub fn rank<F: Field>(rows: &[Vec<F>]) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m).len()
}

/// Affine solution set `particular + span(nullspace)` of `sum_k x_k cols[k] = target`.
#[derive(Clone, Debug)]
pub struct Solution<F> {
    pub particular: Vec<F>,
    pub nullspace: Vec<Vec<F>>,
}

impl<F: Field> Solution<F> {
    /// Whether `x` solves the system this set describes, tested by expressing
    /// `x - particular` in the nullspace basis.
    pub fn contains(&self, x: &[F]) -> bool {
        let d: Vec<F> = x.iter().zip(&self.particular).map(|(a, b)| a.sub(b)).collect();
        if d.iter().all(|v| v.is_zero()) {
            return true;
        }
        if self.nullspace.is_empty() {
            return false;
        }
        let mut rows = self.nullspace.clone();
        let r0 = rank(&rows);
        rows.push(d);
        rank(&rows) == r0
    }
}

/// Solve `sum_k x_k cols[k] = target` where every column has length `target.len()`.
pub fn solve<F: Field>(cols: &[Vec<F>], target: &[F]) -> Option<Solution<F>> {
    let n = cols.len();
    let m = target.len();
    // augmented system: rows are equations
    let mut rows: Vec<Vec<F>> = (0..m)
        .map(|i| {
            let mut r: Vec<F> = cols.iter().map(|c| c[i].clone()).collect();
            r.push(target[i].clone());
            r
        })
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .collect();
    if rows.is_empty() {
        return Some(Solution { particular: vec![F::zero(); n], nullspace: basis_all(n) });
    }
    let pivots = rref(&mut rows);
    if pivots.last() == Some(&n) {
        return None;
    }
    let mut particular = vec![F::zero(); n];
    for (r, &c) in pivots.iter().enumerate() {
        particular[c] = rows[r][n].clone();
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let nullspace = free
        .iter()
        .map(|&fc| {
            let mut v = vec![F::zero(); n];
            v[fc] = F::one();
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = rows[r][fc].neg();
            }
            v
        })
        .collect();
    Some(Solution { particular, nullspace })
}

fn basis_all<F: Field>(n: usize) -> Vec<Vec<F>> {
    (0..n)
        .map(|i| {
            let mut v = vec![F::zero(); n];
            v[i] = F::one();
            v
        })
        .collect()
}

/// Basis of `{x : sum_k x_k cols[k] = 0}`.
pub fn nullspace<F: Field>(cols: &[Vec<F>], len: usize) -> Vec<Vec<F>> {
    solve(cols, &vec![F::zero(); len]).map(|s| s.nullspace).unwrap_or_default()
}

/// Indices of a maximal linearly independent subset of `vecs`, scanning in order.
pub fn independent_subset<F: Field>(vecs: &[Vec<F>]) -> Vec<usize> {
    let len = vecs.first().map_or(0, |v| v.len());
    let mut basis: Vec<(usize, Vec<F>)> = Vec::new(); // (pivot column, reduced row)
    let mut keep = Vec::new();
    for (i, v) in vecs.iter().enumerate() {
        let mut w = v.clone();
        for (p, b) in &basis {
            if !w[*p].is_zero() {
                let f = w[*p].clone();
                for (x, y) in w.iter_mut().zip(b) {
                    if !y.is_zero() {
                        *x = x.sub(&f.mul(y));
                    }
                }
            }
        }
        if let Some(p) = (0..len).find(|&c| !w[c].is_zero()) {
            let inv = F::one().div(&w[p]);
            for x in w.iter_mut() {
                *x = x.mul(&inv);
            }
            basis.push((p, w));
            keep.push(i);
        }
    }
    keep
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64) -> BigRational {
        BigRational::from_integer(a.into())
    }

    #[test]
    fn solve_small() {
        let cols = vec![vec![q(1), q(0), q(1)], vec![q(0), q(1), q(1)], vec![q(1), q(1), q(2)]];
        let s = solve(&cols, &[q(2), q(3), q(5)]).unwrap();
        assert_eq!(s.nullspace.len(), 1);
        assert!(s.contains(&[q(2), q(3), q(0)]));
        assert!(s.contains(&[q(0), q(1), q(2)]));
        assert!(!s.contains(&[q(1), q(1), q(1)]));
        assert!(solve(&cols, &[q(1), q(1), q(0)]).is_none());
    }

    #[test]
    fn fp_field() {
        let a = Fp::new(-5);
        assert_eq!(a.add(&Fp(5)), Fp(0));
        assert_eq!(Fp(7).div(&Fp(7)), Fp(1));
        assert_eq!(independent_subset(&[vec![Fp(1), Fp(2)], vec![Fp(2), Fp(4)], vec![Fp(0), Fp(1)]]), vec![0, 2]);
    }
}
