//! Exact rank computations over ℚ for sparse vectors.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::scalar::Rational;

/// Incremental row echelon form. Each stored row is zero at the pivots of
/// all rows stored before it.
#[derive(Clone, Debug)]
pub struct Echelon<K> {
    rows: Vec<(K, BTreeMap<K, Rational>)>,
}

impl<K: Ord + Clone> Default for Echelon<K> {
    fn default() -> Self {
        Echelon { rows: Vec::new() }
    }
}

impl<K: Ord + Clone> Echelon<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduce `v` against the stored rows.
    pub fn reduce(&self, v: &BTreeMap<K, Rational>) -> BTreeMap<K, Rational> {
        let mut v: BTreeMap<K, Rational> = v.iter().filter(|(_, c)| !c.is_zero()).map(|(k, c)| (k.clone(), *c)).collect();
        for (pivot, row) in &self.rows {
            let Some(&f) = v.get(pivot) else { continue };
            let f = f / row[pivot];
            for (k, c) in row {
                let e = v.entry(k.clone()).or_insert_with(Rational::zero);
                *e -= f * c;
                if e.is_zero() {
                    v.remove(k);
                }
            }
        }
        v
    }

    /// Adds `v`; returns whether it was independent of the stored rows.
    pub fn insert(&mut self, v: &BTreeMap<K, Rational>) -> bool {
        let r = self.reduce(v);
        match r.keys().next().cloned() {
            Some(pivot) => {
                self.rows.push((pivot, r));
                true
            }
            None => false,
        }
    }

    pub fn contains(&self, v: &BTreeMap<K, Rational>) -> bool {
        self.reduce(v).is_empty()
    }
}

/// Rank of a family of sparse vectors.
pub fn rank<K: Ord + Clone>(vectors: &[BTreeMap<K, Rational>]) -> usize {
    let mut e = Echelon::new();
    for v in vectors {
        e.insert(v);
    }
    e.rank()
}

/// Gram-style determinant test: a square rational matrix is positive
/// definite iff all leading principal minors are positive. Uses symmetric
/// elimination (LDLᵀ without pivoting).
#[allow(clippy::needless_range_loop)]
pub fn is_positive_definite(m: &[Vec<Rational>]) -> bool {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m.to_vec();
    for i in 0..n {
        if a[i][i] <= Rational::zero() {
            return false;
        }
        for r in i + 1..n {
            let f = a[r][i] / a[i][i];
            if f.is_zero() {
                continue;
            }
            for c in i..n {
                let t = a[i][c];
                a[r][c] -= f * t;
            }
        }
    }
    true
}

/// Solves the square system `m·x = rhs` exactly; `None` if `m` is singular.
#[allow(clippy::needless_range_loop)]
pub fn solve(m: &[Vec<Rational>], rhs: &[Rational]) -> Option<Vec<Rational>> {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m.iter().zip(rhs).map(|(row, b)| row.iter().copied().chain(core::iter::once(*b)).collect()).collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        let p = a[col][col];
        for c in col..=n {
            a[col][c] /= p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col];
                for c in col..=n {
                    let t = a[col][c];
                    a[r][c] -= f * t;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(entries: &[(u32, i64)]) -> BTreeMap<u32, Rational> {
        entries.iter().map(|&(k, c)| (k, Rational::from_integer(c as i128))).collect()
    }

    #[test]
    fn rank_of_small_families() {
        assert_eq!(rank::<u32>(&[]), 0);
        assert_eq!(rank(&[v(&[(0, 1), (1, 1)]), v(&[(1, 1), (2, 1)]), v(&[(0, 1), (2, -1)])]), 2);
        assert_eq!(rank(&[v(&[(0, 2)]), v(&[(0, 3)])]), 1);
        assert_eq!(rank(&[v(&[(5, 1)]), v(&[(1, 1)]), v(&[(1, 1), (5, 1)])]), 2);
        let mut e = Echelon::new();
        e.insert(&v(&[(0, 1), (1, 1)]));
        assert!(e.contains(&v(&[(0, 2), (1, 2)])));
        assert!(!e.contains(&v(&[(0, 1)])));
    }

    #[test]
    fn positive_definiteness() {
        let r = |x: i64| Rational::from_integer(x as i128);
        assert!(is_positive_definite(&[alloc::vec![r(2), r(1)], alloc::vec![r(1), r(2)]]));
        assert!(!is_positive_definite(&[alloc::vec![r(1), r(2)], alloc::vec![r(2), r(1)]]));
    }

    #[test]
    fn solves_square_systems() {
        let r = |x: i64| Rational::from_integer(x as i128);
        let m = [alloc::vec![r(0), r(2)], alloc::vec![r(3), r(1)]];
        assert_eq!(solve(&m, &[r(4), r(5)]), Some(alloc::vec![r(1), r(2)]));
        assert_eq!(solve(&[alloc::vec![r(1), r(1)], alloc::vec![r(2), r(2)]], &[r(1), r(2)]), None);
    }
}
