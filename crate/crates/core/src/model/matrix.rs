//! Sparse matrices over the rational group algebra ℚ[G].

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::group::{Elem, FiniteGroup, Subgroup, TupleCodec};
use crate::scalar::Rational;

/// A finitely supported element `Σ c_g u_g` of ℚ[G].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GroupAlgElem {
    terms: BTreeMap<Elem, Rational>,
}

impl GroupAlgElem {
    pub fn zero() -> GroupAlgElem {
        GroupAlgElem::default()
    }

    /// `c·u_g`.
    pub fn monomial(g: Elem, c: Rational) -> GroupAlgElem {
        let mut x = GroupAlgElem::zero();
        x.add_term(g, c);
        x
    }

    pub fn unit_at(g: Elem) -> GroupAlgElem {
        GroupAlgElem::monomial(g, Rational::one())
    }

    pub fn terms(&self) -> impl Iterator<Item = (Elem, &Rational)> {
        self.terms.iter().map(|(&g, c)| (g, c))
    }

    pub fn coeff(&self, g: Elem) -> Rational {
        self.terms.get(&g).copied().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, g: Elem, c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(g).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&g);
        }
    }

    pub fn add_scaled(&mut self, other: &GroupAlgElem, c: Rational) {
        for (g, x) in other.terms() {
            self.add_term(g, *x * c);
        }
    }

    pub fn scaled(&self, c: Rational) -> GroupAlgElem {
        let mut out = GroupAlgElem::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn mul(&self, other: &GroupAlgElem, group: &FiniteGroup) -> GroupAlgElem {
        let mut out = GroupAlgElem::zero();
        for (a, x) in self.terms() {
            for (b, y) in other.terms() {
                out.add_term(group.mul(a, b), *x * *y);
            }
        }
        out
    }

    /// `u_a · self · u_b`.
    pub fn sandwiched(&self, a: Elem, b: Elem, group: &FiniteGroup) -> GroupAlgElem {
        GroupAlgElem { terms: self.terms().map(|(g, c)| (group.product([a, g, b]), *c)).collect() }
    }

    /// `u_g ↦ u_{g⁻¹}`.
    pub fn star(&self, group: &FiniteGroup) -> GroupAlgElem {
        GroupAlgElem { terms: self.terms().map(|(g, c)| (group.inv(g), *c)).collect() }
    }

    /// The trace `τ(u_g) = δ_{g,e}`.
    pub fn identity_coeff(&self) -> Rational {
        self.coeff(Elem::IDENTITY)
    }

    pub fn is_supported_in(&self, subgroup: &Subgroup) -> bool {
        self.terms.keys().all(|&g| subgroup.contains(g))
    }

    /// The conditional expectation onto ℚ[H]: drops terms outside `H`.
    pub fn restricted_to(&self, subgroup: &Subgroup) -> GroupAlgElem {
        GroupAlgElem { terms: self.terms().filter(|&(g, _)| subgroup.contains(g)).map(|(g, c)| (g, *c)).collect() }
    }

    /// The single term, if the element is `c·u_g` with `c ≠ 0`.
    pub fn as_monomial(&self) -> Option<(Elem, Rational)> {
        let mut it = self.terms();
        match (it.next(), it.next()) {
            (Some((g, c)), None) => Some((g, *c)),
            _ => None,
        }
    }
}

/// Whether a tower level is `M_{I^k}(N)` or `M_{I^k}(M)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Parity {
    /// Entries in ℚ[G], modelling `M_{I^k}(M)`.
    Even,
    /// Entries in ℚ[H], modelling `M_{I^k}(N)`.
    Odd,
}

/// The matrix algebra `M_{I^k}(·)` of a given parity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Level {
    pub tuple_len: usize,
    pub parity: Parity,
}

impl Level {
    pub fn even(tuple_len: usize) -> Level {
        Level { tuple_len, parity: Parity::Even }
    }

    pub fn odd(tuple_len: usize) -> Level {
        Level { tuple_len, parity: Parity::Odd }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = match self.parity {
            Parity::Even => "ev",
            Parity::Odd => "od",
        };
        write!(f, "{p}{}", self.tuple_len)
    }
}

/// A sparse `I^k × I^k` matrix with entries in ℚ[G]. Rows and columns are
/// indexed by [`TupleCodec`] codes, whose leading tuple entry is the most
/// significant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupAlgebraMatrix {
    level: Level,
    index: usize,
    entries: BTreeMap<(u32, u32), GroupAlgElem>,
}

impl GroupAlgebraMatrix {
    /// The zero matrix over `I = {0, …, index-1}`.
    pub fn zero(level: Level, index: usize) -> GroupAlgebraMatrix {
        GroupAlgebraMatrix { level, index, entries: BTreeMap::new() }
    }

    pub fn identity(level: Level, index: usize) -> GroupAlgebraMatrix {
        let mut m = GroupAlgebraMatrix::zero(level, index);
        for r in 0..m.size() as u32 {
            m.entries.insert((r, r), GroupAlgElem::unit_at(Elem::IDENTITY));
        }
        m
    }

    pub fn level(&self) -> Level {
        self.level
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn codec(&self) -> TupleCodec {
        TupleCodec::new(self.index, self.level.tuple_len)
    }

    /// `n^k`.
    pub fn size(&self) -> usize {
        self.codec().len()
    }

    pub fn entries(&self) -> impl Iterator<Item = ((u32, u32), &GroupAlgElem)> {
        self.entries.iter().map(|(&k, v)| (k, v))
    }

    pub fn num_entries(&self) -> usize {
        self.entries.len()
    }

    pub fn entry(&self, row: u32, col: u32) -> Option<&GroupAlgElem> {
        self.entries.get(&(row, col))
    }

    pub fn entry_at(&self, row: &[u32], col: &[u32]) -> Option<&GroupAlgElem> {
        let c = self.codec();
        self.entry(c.encode(row) as u32, c.encode(col) as u32)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn add_entry(&mut self, row: u32, col: u32, value: &GroupAlgElem) {
        if value.is_zero() {
            return;
        }
        let e = self.entries.entry((row, col)).or_default();
        e.add_scaled(value, Rational::one());
        if e.is_zero() {
            self.entries.remove(&(row, col));
        }
    }

    pub fn add_term(&mut self, row: u32, col: u32, g: Elem, c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.entries.entry((row, col)).or_default();
        e.add_term(g, c);
        if e.is_zero() {
            self.entries.remove(&(row, col));
        }
    }

    fn expect_same_shape(&self, other: &GroupAlgebraMatrix) -> Result<()> {
        if self.level != other.level || self.index != other.index {
            return Err(Error::LevelMismatch);
        }
        Ok(())
    }

    pub fn add_scaled(&mut self, other: &GroupAlgebraMatrix, c: Rational) -> Result<()> {
        self.expect_same_shape(other)?;
        for ((r, s), v) in other.entries() {
            self.add_entry(r, s, &v.scaled(c));
        }
        Ok(())
    }

    pub fn scaled(&self, c: Rational) -> GroupAlgebraMatrix {
        let mut out = GroupAlgebraMatrix::zero(self.level, self.index);
        if !c.is_zero() {
            out.entries = self.entries.iter().map(|(&k, v)| (k, v.scaled(c))).collect();
        }
        out
    }

    pub fn mul(&self, other: &GroupAlgebraMatrix, group: &FiniteGroup) -> Result<GroupAlgebraMatrix> {
        self.expect_same_shape(other)?;
        let mut rows: BTreeMap<u32, Vec<(u32, &GroupAlgElem)>> = BTreeMap::new();
        for ((r, s), v) in other.entries() {
            rows.entry(r).or_default().push((s, v));
        }
        let mut out = GroupAlgebraMatrix::zero(self.level, self.index);
        for ((r, mid), a) in self.entries() {
            if let Some(row) = rows.get(&mid) {
                for &(s, b) in row {
                    out.add_entry(r, s, &a.mul(b, group));
                }
            }
        }
        Ok(out)
    }

    /// Transpose with `u_g ↦ u_{g⁻¹}` entrywise.
    pub fn star(&self, group: &FiniteGroup) -> GroupAlgebraMatrix {
        GroupAlgebraMatrix {
            level: self.level,
            index: self.index,
            entries: self.entries.iter().map(|(&(r, s), v)| ((s, r), v.star(group))).collect(),
        }
    }

    /// The same entries viewed at another level of the same size.
    pub fn reinterpreted(&self, level: Level) -> Result<GroupAlgebraMatrix> {
        if level.tuple_len != self.level.tuple_len {
            return Err(Error::LevelMismatch);
        }
        Ok(GroupAlgebraMatrix { level, index: self.index, entries: self.entries.clone() })
    }

    /// Every entry lies in ℚ[H].
    pub fn is_supported_in(&self, subgroup: &Subgroup) -> bool {
        self.entries.values().all(|v| v.is_supported_in(subgroup))
    }

    /// `a·self` for a rational `a` with `a·other = self`, if one exists.
    pub fn ratio_to(&self, other: &GroupAlgebraMatrix) -> Option<Rational> {
        if self.level != other.level || self.entries.len() != other.entries.len() {
            return None;
        }
        let (k, v) = other.entries.iter().next()?;
        let (g, c) = v.terms().next()?;
        let a = self.entries.get(k)?.coeff(g) / c;
        (other.scaled(a) == *self).then_some(a)
    }
}

/// A monomial matrix: row `r` has the single entry `u_{g_r}` in column
/// `σ(r)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monomial {
    targets: Vec<(u32, Elem)>,
    sources: Vec<u32>,
}

impl Monomial {
    pub fn new(targets: Vec<(u32, Elem)>) -> Result<Monomial> {
        let mut sources = alloc::vec![u32::MAX; targets.len()];
        for (r, &(c, _)) in targets.iter().enumerate() {
            let slot = sources.get_mut(c as usize).ok_or(Error::Inconsistent("monomial column out of range".into()))?;
            if *slot != u32::MAX {
                return Err(Error::Inconsistent("monomial matrix is not a permutation pattern".into()));
            }
            *slot = r as u32;
        }
        Ok(Monomial { targets, sources })
    }

    pub fn target(&self, row: u32) -> (u32, Elem) {
        self.targets[row as usize]
    }

    pub fn to_matrix(&self, level: Level, index: usize) -> GroupAlgebraMatrix {
        let mut m = GroupAlgebraMatrix::zero(level, index);
        for (r, &(c, g)) in self.targets.iter().enumerate() {
            m.add_term(r as u32, c, g, Rational::one());
        }
        m
    }

    /// `P A P*`, whose `(r, s)` entry is `u_{g_r} A_{σ(r),σ(s)} u_{g_s}⁻¹`.
    pub fn conjugate(&self, a: &GroupAlgebraMatrix, group: &FiniteGroup) -> GroupAlgebraMatrix {
        let mut out = GroupAlgebraMatrix::zero(a.level(), a.index());
        for ((x, y), v) in a.entries() {
            let r = self.sources[x as usize];
            let s = self.sources[y as usize];
            let gr = self.targets[r as usize].1;
            let gs = self.targets[s as usize].1;
            out.add_entry(r, s, &v.sandwiched(gr, group.inv(gs), group));
        }
        out
    }
}
