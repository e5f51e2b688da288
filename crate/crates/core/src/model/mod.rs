//! The operator-matrix model of the tower `N ⊂ M ⊂ M_1 ⊂ ⋯` for
//! `N = R⋊H ⊂ M = R⋊G`.
//!
//! `M_{2k-1}` is modelled by `M_{I^k}(N)` (odd level `k`) and `M_{2k}` by
//! `M_{I^k}(M)` (even level `k`), with `I = H\G`. Only the group labels of
//! the entries are kept; the relative commutants are spanned by matrices
//! whose entries are rational multiples of `u_{(⊓g_i)(⊓g_j)⁻¹}`.

mod matrix;

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_traits::{One, Zero};

pub use matrix::{GroupAlgElem, GroupAlgebraMatrix, Level, Monomial, Parity};

use crate::error::{Error, Result};
use crate::group::{orbits, CosetSpace, Elem, FiniteGroup, Orbits, TupleCodec};
use crate::linalg::Echelon;
use crate::planar::Color;
use crate::scalar::{Rational, Scalar};

/// Which commutant a basis or membership test refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Commutant {
    /// `N′ ∩ M_k`: invariance under `θ^{(k)}(u_h)`, `h ∈ H`.
    OfN,
    /// `M′ ∩ M_k`: invariance under `θ^{(k)}(u_g)`, `g ∈ G`.
    OfM,
}

/// An element `factor · matrix` of `N′ ∩ M_{c-1}` at color `c`. Colors `0±`
/// hold a `1×1` scalar at odd level 0.
#[derive(Clone, Debug)]
pub struct ModelElement {
    color: Color,
    factor: Scalar,
    matrix: GroupAlgebraMatrix,
}

impl ModelElement {
    pub fn new(color: Color, factor: Scalar, matrix: GroupAlgebraMatrix) -> Result<ModelElement> {
        if matrix.level() != level_of(color) {
            return Err(Error::LevelMismatch);
        }
        Ok(ModelElement { color, factor, matrix })
    }

    pub fn color(&self) -> Color {
        self.color
    }

    pub fn factor(&self) -> &Scalar {
        &self.factor
    }

    pub fn matrix(&self) -> &GroupAlgebraMatrix {
        &self.matrix
    }

    pub fn is_zero(&self) -> bool {
        self.factor.is_zero() || self.matrix.is_zero()
    }

    pub fn scaled(&self, c: &Scalar) -> ModelElement {
        ModelElement { color: self.color, factor: &self.factor * c, matrix: self.matrix.clone() }
    }

    /// The sum, provided the two prefactors differ by a rational factor.
    pub fn plus(&self, other: &ModelElement) -> Result<ModelElement> {
        if self.color != other.color {
            return Err(Error::ColorMismatch { expected: self.color, got: other.color });
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        let ratio = other.factor.checked_div(&self.factor).and_then(|r| r.as_rational()).ok_or_else(|| {
            Error::Inconsistent(alloc::format!("cannot add elements with prefactors {} and {}", self.factor, other.factor))
        })?;
        let mut matrix = self.matrix.clone();
        matrix.add_scaled(&other.matrix, ratio)?;
        Ok(ModelElement { color: self.color, factor: self.factor.clone(), matrix })
    }

    /// The scalar value at colors `0±` and 1.
    pub fn as_scalar(&self) -> Option<Scalar> {
        if self.matrix.size() != 1 {
            return None;
        }
        let c = self.matrix.entry(0, 0).map(|v| v.identity_coeff()).unwrap_or_else(Rational::zero);
        Some(&self.factor * &Scalar::from_rational(c))
    }
}

impl PartialEq for ModelElement {
    fn eq(&self, other: &ModelElement) -> bool {
        if self.color != other.color {
            return false;
        }
        if self.is_zero() || other.is_zero() {
            return self.is_zero() && other.is_zero();
        }
        match other.factor.checked_div(&self.factor).and_then(|r| r.as_rational()) {
            Some(r) => self.matrix == other.matrix.scaled(r),
            None => false,
        }
    }
}

/// The tower level modelling `M_{c-1}` for color `c`.
pub fn level_of(color: Color) -> Level {
    match color {
        Color::ZeroPlus | Color::ZeroMinus => Level::odd(0),
        Color::Positive(m) if m % 2 == 1 => Level::even((m / 2) as usize),
        Color::Positive(m) => Level::odd((m / 2) as usize),
    }
}

/// The tower `M_{I^k}(N) ⊂ M_{I^k}(M) ⊂ M_{I^{k+1}}(N) ⊂ ⋯` for a subgroup
/// `H ⊂ G`.
#[derive(Clone, Debug)]
pub struct SubfactorModel {
    cosets: CosetSpace,
}

impl SubfactorModel {
    pub fn new(cosets: CosetSpace) -> SubfactorModel {
        SubfactorModel { cosets }
    }

    pub fn cosets(&self) -> &CosetSpace {
        &self.cosets
    }

    pub fn group(&self) -> &FiniteGroup {
        self.cosets.group()
    }

    /// `n = [G : H]`.
    pub fn index(&self) -> usize {
        self.cosets.index()
    }

    /// `δ = √n`.
    pub fn delta(&self) -> Scalar {
        Scalar::sqrt_int(self.index() as u64)
    }

    pub fn codec(&self, tuple_len: usize) -> TupleCodec {
        TupleCodec::new(self.index(), tuple_len)
    }

    /// `(⊓g_i)(⊓g_j)⁻¹`, the group label of entry `(i, j)`.
    pub fn entry_label(&self, i: &[u32], j: &[u32]) -> Elem {
        let g = self.group();
        g.mul(self.cosets.tuple_product(i), g.inv(self.cosets.tuple_product(j)))
    }

    pub fn identity(&self, level: Level) -> GroupAlgebraMatrix {
        GroupAlgebraMatrix::identity(level, self.index())
    }

    /// `[i, j]^{ev}`.
    pub fn basis_ev(&self, i: &[u32], j: &[u32]) -> GroupAlgebraMatrix {
        let codec = self.codec(i.len());
        let mut m = GroupAlgebraMatrix::zero(Level::even(i.len()), self.index());
        m.add_term(codec.encode(i) as u32, codec.encode(j) as u32, self.entry_label(i, j), Rational::one());
        m
    }

    /// `[i, j]^{od}`, which vanishes unless `(i, j) ∈ Y_k`.
    pub fn basis_od(&self, i: &[u32], j: &[u32]) -> GroupAlgebraMatrix {
        let label = self.entry_label(i, j);
        let codec = self.codec(i.len());
        let mut m = GroupAlgebraMatrix::zero(Level::odd(i.len()), self.index());
        if self.cosets.subgroup().contains(label) {
            m.add_term(codec.encode(i) as u32, codec.encode(j) as u32, label, Rational::one());
        }
        m
    }

    pub fn matmul(&self, a: &GroupAlgebraMatrix, b: &GroupAlgebraMatrix) -> Result<GroupAlgebraMatrix> {
        a.mul(b, self.group())
    }

    pub fn adjoint(&self, a: &GroupAlgebraMatrix) -> GroupAlgebraMatrix {
        a.star(self.group())
    }

    /// `θ_{i,j}(u_g) = 1_H(g_i g g_j⁻¹) u_{g_i g g_j⁻¹}`, extended linearly.
    pub fn theta(&self, x: &GroupAlgElem) -> GroupAlgebraMatrix {
        let mut one = GroupAlgebraMatrix::zero(Level::even(0), self.index());
        one.add_entry(0, 0, x);
        self.theta_inclusion(&one).expect("even level")
    }

    /// `Θ_{k+1}`: `M_{I^k}(M) → M_{I^{k+1}}(N)`, applying `θ` on a new leading
    /// index.
    pub fn theta_inclusion(&self, a: &GroupAlgebraMatrix) -> Result<GroupAlgebraMatrix> {
        let level = a.level();
        if level.parity != Parity::Even {
            return Err(Error::LevelMismatch);
        }
        let group = self.group();
        let n = self.index();
        let stride = a.size() as u32;
        let mut out = GroupAlgebraMatrix::zero(Level::odd(level.tuple_len + 1), n);
        for ((u, v), value) in a.entries() {
            for i in 0..n as u32 {
                let gi = self.cosets.rep(i);
                for (g, c) in value.terms() {
                    let x = group.mul(gi, g);
                    let j = self.cosets.coset_of(x);
                    let label = group.mul(x, group.inv(self.cosets.rep(j)));
                    out.add_term(i * stride + u, j * stride + v, label, *c);
                }
            }
        }
        Ok(out)
    }

    /// `M_{I^k}(N) ⊂ M_{I^k}(M)`.
    pub fn odd_to_even(&self, a: &GroupAlgebraMatrix) -> Result<GroupAlgebraMatrix> {
        if a.level().parity != Parity::Odd {
            return Err(Error::LevelMismatch);
        }
        a.reinterpreted(Level::even(a.level().tuple_len))
    }

    /// `θ^{(k)}(u_g) = Θ_k ∘ ⋯ ∘ Θ_1(u_g)`, computed directly as a monomial
    /// matrix from the innermost index outwards.
    pub fn theta_power(&self, g: Elem, tuple_len: usize) -> Monomial {
        let group = self.group();
        let codec = self.codec(tuple_len);
        let targets = codec
            .iter()
            .map(|row| {
                let mut x = g;
                let mut col = alloc::vec![0u32; tuple_len];
                for l in (0..tuple_len).rev() {
                    let y = group.mul(self.cosets.rep(row[l]), x);
                    col[l] = self.cosets.coset_of(y);
                    x = group.mul(y, group.inv(self.cosets.rep(col[l])));
                }
                (codec.encode(&col) as u32, x)
            })
            .collect();
        Monomial::new(targets).expect("θ^(k)(u_g) is monomial")
    }

    /// `ẽ_m ∈ M_m` for `m ≥ 1`.
    pub fn jones_projection(&self, m: u32) -> Result<GroupAlgebraMatrix> {
        if m == 0 {
            return Err(Error::BadColor(Color::Positive(0)));
        }
        let n = self.index();
        let k = m.div_ceil(2) as usize;
        let codec = self.codec(k);
        let stride = codec.len() as u32 / n as u32;
        if m % 2 == 1 {
            let mut e = GroupAlgebraMatrix::zero(Level::odd(k), n);
            for r in 0..stride {
                e.add_term(r, r, Elem::IDENTITY, Rational::one());
            }
            Ok(e)
        } else {
            let mut e = GroupAlgebraMatrix::zero(Level::even(k), n);
            let w = Rational::new(1, n as i128);
            let group = self.group();
            for tail in 0..stride {
                for i in 0..n as u32 {
                    for j in 0..n as u32 {
                        let label = group.mul(self.cosets.rep(i), group.inv(self.cosets.rep(j)));
                        e.add_term(i * stride + tail, j * stride + tail, label, w);
                    }
                }
            }
            Ok(e)
        }
    }

    /// `M_{I^k}(E_N)`: even level `k` to odd level `k`.
    pub fn cond_exp_n(&self, a: &GroupAlgebraMatrix) -> Result<GroupAlgebraMatrix> {
        if a.level().parity != Parity::Even {
            return Err(Error::LevelMismatch);
        }
        let h = self.cosets.subgroup();
        let mut out = GroupAlgebraMatrix::zero(Level::odd(a.level().tuple_len), self.index());
        for ((r, s), v) in a.entries() {
            out.add_entry(r, s, &v.restricted_to(h));
        }
        Ok(out)
    }

    /// `M_{I^k}(E_M)`: odd level `k+1` to even level `k`, contracting the
    /// leading index by `n⁻¹ Σ u_{g_i}⁻¹ a_{ij} u_{g_j}`.
    pub fn cond_exp_m(&self, a: &GroupAlgebraMatrix) -> Result<GroupAlgebraMatrix> {
        let level = a.level();
        if level.parity != Parity::Odd || level.tuple_len == 0 {
            return Err(Error::LevelMismatch);
        }
        let group = self.group();
        let n = self.index();
        let stride = (a.size() / n) as u32;
        let w = Rational::new(1, n as i128);
        let mut out = GroupAlgebraMatrix::zero(Level::even(level.tuple_len - 1), n);
        for ((r, s), v) in a.entries() {
            let (i, u) = (r / stride, r % stride);
            let (j, t) = (s / stride, s % stride);
            let gi = group.inv(self.cosets.rep(i));
            out.add_entry(u, t, &v.sandwiched(gi, self.cosets.rep(j), group).scaled(w));
        }
        Ok(out)
    }

    /// The trace-preserving conditional expectation onto `M′ ∩ M_k`: the
    /// average of `Ad θ^{(k)}(u_g)` over `G`.
    pub fn cond_exp_commutant(&self, a: &GroupAlgebraMatrix) -> GroupAlgebraMatrix {
        let group = self.group();
        let mut out = GroupAlgebraMatrix::zero(a.level(), self.index());
        let w = Rational::new(1, group.order() as i128);
        for g in group.elements() {
            let p = self.theta_power(g, a.level().tuple_len);
            out.add_scaled(&p.conjugate(a, group), w).expect("same level");
        }
        out
    }

    /// The normalized trace `n^{-k} Σ_i τ(A_{ii})`.
    pub fn trace(&self, a: &GroupAlgebraMatrix) -> Rational {
        let total = a.entries().filter(|((r, s), _)| r == s).fold(Rational::zero(), |acc, (_, v)| acc + v.identity_coeff());
        total / Rational::from_integer(a.size() as i128)
    }

    fn action_generators(&self, flavor: Commutant) -> Vec<Elem> {
        match flavor {
            Commutant::OfN => self.cosets.subgroup().generators().to_vec(),
            Commutant::OfM => self.group().generators().to_vec(),
        }
    }

    fn acting_order(&self, flavor: Commutant) -> usize {
        match flavor {
            Commutant::OfN => self.cosets.subgroup().order(),
            Commutant::OfM => self.group().order(),
        }
    }

    /// Index pairs that may carry a nonzero entry: `Y_k` at odd levels and
    /// all of `I^k × I^k` at even levels. Returned as code pairs.
    pub fn admissible_pairs(&self, level: Level) -> Vec<(u32, u32)> {
        let codec = self.codec(level.tuple_len);
        let full: Vec<u32> = codec.iter().map(|t| self.cosets.coset_of(self.cosets.tuple_product(&t))).collect();
        let mut out = Vec::new();
        for a in 0..codec.len() {
            for b in 0..codec.len() {
                if level.parity == Parity::Even || full[a] == full[b] {
                    out.push((a as u32, b as u32));
                }
            }
        }
        out
    }

    /// The diagonal `β^k` action on code pairs.
    pub fn act_on_pair(&self, g: Elem, tuple_len: usize, (a, b): (u32, u32)) -> (u32, u32) {
        let codec = self.codec(tuple_len);
        let moved = |c: u32| codec.encode(&self.cosets.beta_k(g, &codec.decode(c as usize))) as u32;
        (moved(a), moved(b))
    }

    /// Orbits of `H` (or `G`) on the admissible pairs, with least members as
    /// representatives.
    pub fn pair_orbits(&self, level: Level, flavor: Commutant) -> Orbits<(u32, u32)> {
        let gens = self.action_generators(flavor);
        orbits(self.admissible_pairs(level), &gens, |g, &p| self.act_on_pair(g, level.tuple_len, p))
            .expect("β^k preserves admissible pairs")
    }

    /// The matrix with entry `c_{ij} u_{(⊓g_i)(⊓g_j)⁻¹}` at each listed pair.
    pub fn from_coefficients(&self, level: Level, coeffs: &BTreeMap<(u32, u32), Rational>) -> GroupAlgebraMatrix {
        let codec = self.codec(level.tuple_len);
        let mut m = GroupAlgebraMatrix::zero(level, self.index());
        for (&(a, b), &c) in coeffs {
            let label = self.entry_label(&codec.decode(a as usize), &codec.decode(b as usize));
            m.add_term(a, b, label, c);
        }
        m
    }

    /// `Σ_{h∈H} h[i,j]` (or the sum over `G`) for each orbit representative,
    /// ordered by representative.
    pub fn orbit_basis(&self, level: Level, flavor: Commutant) -> Vec<GroupAlgebraMatrix> {
        let order = self.acting_order(flavor);
        self.pair_orbits(level, flavor)
            .members
            .into_iter()
            .map(|orbit| {
                let mult = Rational::from_integer((order / orbit.len()) as i128);
                self.from_coefficients(level, &orbit.into_iter().map(|p| (p, mult)).collect())
            })
            .collect()
    }

    /// A basis of `N′ ∩ M_{c-1}` (or `M′ ∩ M_{c-1}`) at color `c`.
    pub fn relative_commutant_basis(&self, color: Color, flavor: Commutant) -> Vec<ModelElement> {
        self.orbit_basis(level_of(color), flavor).into_iter().map(|m| ModelElement { color, factor: Scalar::one(), matrix: m }).collect()
    }

    /// The coefficients `C_{ij}` of a relative-commutant element, after
    /// checking that every entry is `C_{ij} u_{(⊓g_i)(⊓g_j)⁻¹}`, that odd
    /// levels vanish off `Y_k`, and that `C` is `β^k`-invariant.
    pub fn coefficients(&self, a: &GroupAlgebraMatrix, flavor: Commutant) -> Result<BTreeMap<(u32, u32), Rational>> {
        let level = a.level();
        let codec = self.codec(level.tuple_len);
        let h = self.cosets.subgroup();
        let mut coeffs = BTreeMap::new();
        for ((r, s), v) in a.entries() {
            let (i, j) = (codec.decode(r as usize), codec.decode(s as usize));
            let label = self.entry_label(&i, &j);
            let c = match v.as_monomial() {
                Some((g, c)) if g == label => c,
                _ => {
                    return Err(Error::NotRelativeCommutant(alloc::format!(
                        "entry ({r}, {s}) is not a multiple of the expected group element"
                    )))
                }
            };
            if level.parity == Parity::Odd && !h.contains(label) {
                return Err(Error::NotRelativeCommutant(alloc::format!("entry ({r}, {s}) lies outside Y_{}", level.tuple_len)));
            }
            coeffs.insert((r, s), c);
        }
        for g in self.action_generators(flavor) {
            for (&p, c) in &coeffs {
                if coeffs.get(&self.act_on_pair(g, level.tuple_len, p)) != Some(c) {
                    return Err(Error::NotRelativeCommutant(alloc::format!("coefficients are not invariant at {p:?}")));
                }
            }
        }
        Ok(coeffs)
    }

    /// Dimension of the commutant of `{θ^{(k)}(u_h)}` among matrices with
    /// admissible monomial entries, as the nullity of the commutator map.
    pub fn commutant_dimension(&self, level: Level, flavor: Commutant) -> usize {
        let group = self.group();
        let pairs = self.admissible_pairs(level);
        let monomials: Vec<Monomial> = self.action_generators(flavor).into_iter().map(|g| self.theta_power(g, level.tuple_len)).collect();
        let mut echelon: Echelon<(usize, u32, u32, Elem)> = Echelon::new();
        for &(a, b) in &pairs {
            let x = self.from_coefficients(level, &[((a, b), Rational::one())].into_iter().collect());
            let mut image = BTreeMap::new();
            for (t, p) in monomials.iter().enumerate() {
                let mut diff = p.conjugate(&x, group);
                diff.add_scaled(&x, -Rational::one()).expect("same level");
                for ((r, s), v) in diff.entries() {
                    for (g, c) in v.terms() {
                        image.insert((t, r, s, g), *c);
                    }
                }
            }
            echelon.insert(&image);
        }
        pairs.len() - echelon.rank()
    }

    /// Dimension of `N′ ∩ M_{c-1}` computed by commutator nullity.
    pub fn dimension(&self, color: Color) -> usize {
        if color.is_zero() {
            1
        } else {
            self.commutant_dimension(level_of(color), Commutant::OfN)
        }
    }

    pub fn element(&self, color: Color, matrix: GroupAlgebraMatrix) -> Result<ModelElement> {
        ModelElement::new(color, Scalar::one(), matrix)
    }

    pub fn unit(&self, color: Color) -> ModelElement {
        ModelElement { color, factor: Scalar::one(), matrix: self.identity(level_of(color)) }
    }

    /// The inclusion tangle: identity into `M_{I^k}(M)` from odd levels,
    /// `Θ_{k+1}` from even levels.
    pub fn include(&self, x: &ModelElement) -> Result<ModelElement> {
        let target = x.color.raised();
        let matrix = match x.color {
            Color::ZeroPlus | Color::ZeroMinus => x.matrix.reinterpreted(Level::even(0))?,
            Color::Positive(m) if m % 2 == 0 => self.odd_to_even(&x.matrix)?,
            Color::Positive(_) => self.theta_inclusion(&x.matrix)?,
        };
        Ok(ModelElement { color: target, factor: x.factor.clone(), matrix })
    }

    pub fn multiply(&self, x: &ModelElement, y: &ModelElement) -> Result<ModelElement> {
        if x.color != y.color {
            return Err(Error::ColorMismatch { expected: x.color, got: y.color });
        }
        Ok(ModelElement { color: x.color, factor: &x.factor * &y.factor, matrix: self.matmul(&x.matrix, &y.matrix)? })
    }

    pub fn adjoint_element(&self, x: &ModelElement) -> ModelElement {
        ModelElement { color: x.color, factor: x.factor.clone(), matrix: self.adjoint(&x.matrix) }
    }

    /// The conditional-expectation tangle `δ·E_{M_{c-2}}` from color `c` to
    /// `c-1`; from color 1 it lands in `0-` when `minus` is set.
    pub fn cond_exp(&self, x: &ModelElement, minus: bool) -> Result<ModelElement> {
        let target = x.color.lowered(minus).ok_or(Error::BadColor(x.color))?;
        let factor = &x.factor * &self.delta();
        let matrix = match x.color {
            Color::Positive(1) => {
                let mut m = GroupAlgebraMatrix::zero(Level::odd(0), self.index());
                m.add_term(0, 0, Elem::IDENTITY, self.trace(&x.matrix));
                m
            }
            Color::Positive(m) if m % 2 == 1 => self.cond_exp_n(&x.matrix)?,
            Color::Positive(_) => self.cond_exp_m(&x.matrix)?,
            _ => return Err(Error::BadColor(x.color)),
        };
        Ok(ModelElement { color: target, factor, matrix })
    }

    /// The dual conditional-expectation tangle `δ·E_{M′∩M_{c-1}}`.
    pub fn cond_exp_prime(&self, x: &ModelElement) -> Result<ModelElement> {
        if x.color.is_zero() {
            return Err(Error::BadColor(x.color));
        }
        Ok(ModelElement { color: x.color, factor: &x.factor * &self.delta(), matrix: self.cond_exp_commutant(&x.matrix) })
    }

    /// The Jones-projection tangle `δ·ẽ_{c-1}` at color `c ≥ 2`.
    pub fn jones_element(&self, color: Color) -> Result<ModelElement> {
        match color {
            Color::Positive(c) if c >= 2 => Ok(ModelElement { color, factor: self.delta(), matrix: self.jones_projection(c - 1)? }),
            _ => Err(Error::BadColor(color)),
        }
    }

    pub fn trace_element(&self, x: &ModelElement) -> Scalar {
        if x.color.is_zero() {
            return x.as_scalar().expect("1×1");
        }
        &x.factor * &Scalar::from_rational(self.trace(&x.matrix))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::builtin_pair;
    use crate::linalg::is_positive_definite;

    fn model(name: &str) -> SubfactorModel {
        SubfactorModel::new(builtin_pair(name, 1000).unwrap().into_coset_space())
    }

    fn q(a: i128, b: i128) -> Rational {
        Rational::new(a, b)
    }

    fn levels(max_k: usize) -> Vec<Level> {
        (0..=max_k).flat_map(|k| [Level::even(k), Level::odd(k)]).collect()
    }

    #[test]
    fn matrix_units_multiply_like_matrix_units() {
        let m = model("S3:S2");
        let codec = m.codec(2);
        let tuples: Vec<Vec<u32>> = codec.iter().collect();
        for i in &tuples {
            for j in tuples.iter().step_by(2) {
                for i2 in tuples.iter().step_by(3) {
                    for j2 in &tuples {
                        let prod = m.matmul(&m.basis_ev(i, j), &m.basis_ev(i2, j2)).unwrap();
                        let expected = if j == i2 { m.basis_ev(i, j2) } else { GroupAlgebraMatrix::zero(Level::even(2), 3) };
                        assert_eq!(prod, expected);
                    }
                }
            }
        }
    }

    #[test]
    fn odd_basis_vanishes_off_y() {
        let m = model("S3:S2");
        let y = m.cosets().y_set(2);
        for i in m.codec(2).iter() {
            for j in m.codec(2).iter() {
                assert_eq!(m.basis_od(&i, &j).is_zero(), !y.contains(&(i.clone(), j.clone())));
            }
        }
        let e = m.basis_od(&[0], &[0]);
        assert_eq!(e.entry_at(&[0], &[0]), Some(&GroupAlgElem::unit_at(Elem::IDENTITY)));
        assert_eq!(e.num_entries(), 1);
    }

    #[test]
    fn theta_is_a_unital_star_homomorphism() {
        for name in ["S3:S2", "S4:S3", "C4:C2", "S3:A3"] {
            let m = model(name);
            let g = m.group();
            let one = m.theta(&GroupAlgElem::unit_at(Elem::IDENTITY));
            assert_eq!(one, m.identity(Level::odd(1)));
            for a in g.elements() {
                let ta = m.theta(&GroupAlgElem::unit_at(a));
                assert!(ta.is_supported_in(m.cosets().subgroup()));
                assert_eq!(m.adjoint(&ta), m.theta(&GroupAlgElem::unit_at(g.inv(a))));
                for b in g.elements() {
                    let tb = m.theta(&GroupAlgElem::unit_at(b));
                    assert_eq!(m.matmul(&ta, &tb).unwrap(), m.theta(&GroupAlgElem::unit_at(g.mul(a, b))));
                }
            }
        }
    }

    #[test]
    fn theta_power_matches_iterated_inclusions() {
        for name in ["S3:S2", "C4:C2", "S3:A3"] {
            let m = model(name);
            for g in m.group().elements() {
                let mut iterated = GroupAlgebraMatrix::zero(Level::even(0), m.index());
                iterated.add_term(0, 0, g, Rational::one());
                for k in 1..=3 {
                    iterated = m.odd_to_even(&m.theta_inclusion(&iterated).unwrap()).unwrap();
                    assert_eq!(m.theta_power(g, k).to_matrix(Level::even(k), m.index()), iterated);
                }
            }
        }
    }

    #[test]
    fn theta_inclusion_basis_form() {
        let m = model("S3:S2");
        let h = m.cosets().subgroup();
        for k in 0..=2 {
            let codec = m.codec(k);
            for i in codec.iter() {
                for j in codec.iter() {
                    let image = m.theta_inclusion(&m.basis_ev(&i, &j)).unwrap();
                    let mut expected = GroupAlgebraMatrix::zero(Level::odd(k + 1), 3);
                    for r in 0..3 {
                        for s in 0..3 {
                            let (ri, sj) = ([&[r][..], &i].concat(), [&[s][..], &j].concat());
                            if m.cosets().in_y(&ri, &sj) {
                                expected.add_scaled(&m.basis_od(&ri, &sj), Rational::one()).unwrap();
                            }
                        }
                    }
                    assert_eq!(image, expected);
                    assert!(image.is_supported_in(h));
                }
            }
            let unit = m.theta_inclusion(&m.identity(Level::even(k))).unwrap();
            assert_eq!(unit, m.identity(Level::odd(k + 1)));
        }
    }

    #[test]
    fn inclusions_are_multiplicative_on_commutants() {
        let m = model("S3:S2");
        for level in levels(2) {
            let basis = m.orbit_basis(level, Commutant::OfN);
            let include = |a: &GroupAlgebraMatrix| match level.parity {
                Parity::Even => m.theta_inclusion(a).unwrap(),
                Parity::Odd => m.odd_to_even(a).unwrap(),
            };
            for a in &basis {
                assert_eq!(m.adjoint(&include(a)), include(&m.adjoint(a)));
                for b in &basis {
                    let ab = m.matmul(a, b).unwrap();
                    assert_eq!(include(&ab), m.matmul(&include(a), &include(b)).unwrap());
                }
                let image = include(a);
                assert!(m.coefficients(&image, Commutant::OfN).is_ok(), "{level}");
            }
        }
    }

    #[test]
    fn conditional_expectations() {
        let m = model("S3:S2");
        for k in 0..=2 {
            for a in m.orbit_basis(Level::even(k), Commutant::OfN) {
                assert_eq!(m.cond_exp_m(&m.theta_inclusion(&a).unwrap()).unwrap(), a);
                let en = m.cond_exp_n(&a).unwrap();
                assert_eq!(m.trace(&en), m.trace(&a));
                assert_eq!(m.cond_exp_n(&m.odd_to_even(&en).unwrap()).unwrap(), en);
            }
            for a in m.orbit_basis(Level::odd(k + 1), Commutant::OfN) {
                let em = m.cond_exp_m(&a).unwrap();
                assert_eq!(m.trace(&em), m.trace(&a));
                let back = m.cond_exp_m(&m.theta_inclusion(&em).unwrap()).unwrap();
                assert_eq!(back, em);
            }
        }
        let codec = m.codec(1);
        for i in codec.iter() {
            for j in codec.iter() {
                let en = m.cond_exp_n(&m.basis_ev(&i, &j)).unwrap();
                assert_eq!(en, m.basis_od(&i, &j));
            }
        }
    }

    #[test]
    fn jones_projections_satisfy_temperley_lieb() {
        for name in ["S2:S1", "S3:S2", "S4:S3"] {
            let m = model(name);
            let n = m.index() as i128;
            let max = if n == 4 { 4 } else { 5 };
            let lift = |a: &GroupAlgebraMatrix, to: Level| -> GroupAlgebraMatrix {
                let mut a = a.clone();
                while a.level() != to {
                    a = match a.level().parity {
                        Parity::Odd => m.odd_to_even(&a).unwrap(),
                        Parity::Even => m.theta_inclusion(&a).unwrap(),
                    };
                }
                a
            };
            for e in 1..=max {
                let p = m.jones_projection(e).unwrap();
                assert_eq!(m.matmul(&p, &p).unwrap(), p, "{name} e{e}");
                assert_eq!(m.adjoint(&p), p);
                assert_eq!(m.trace(&p), q(1, n));
                assert!(m.coefficients(&p, Commutant::OfN).is_ok());
                if e < max {
                    let next = m.jones_projection(e + 1).unwrap();
                    let p_up = lift(&p, next.level());
                    let lhs = m.matmul(&m.matmul(&p_up, &next).unwrap(), &p_up).unwrap();
                    assert_eq!(lhs, p_up.scaled(q(1, n)));
                    let rhs = m.matmul(&m.matmul(&next, &p_up).unwrap(), &next).unwrap();
                    assert_eq!(rhs, next.scaled(q(1, n)));
                }
            }
        }
    }

    #[test]
    fn basic_construction_identity() {
        // ẽ_m x ẽ_m = E_{M_{m-2}}(x) ẽ_m for x ∈ M_{m-1}.
        for name in ["S3:S2", "C4:C2"] {
            let m = model(name);
            for k in 0..=2usize {
                let e = m.jones_projection(2 * k as u32 + 1).unwrap();
                let codec = m.codec(k);
                for i in codec.iter() {
                    for j in codec.iter() {
                        let x = m.basis_ev(&i, &j);
                        let lhs = m.matmul(&m.matmul(&e, &m.theta_inclusion(&x).unwrap()).unwrap(), &e).unwrap();
                        let ex = m.theta_inclusion(&m.odd_to_even(&m.cond_exp_n(&x).unwrap()).unwrap()).unwrap();
                        assert_eq!(lhs, m.matmul(&ex, &e).unwrap());
                    }
                }
            }
            for k in 1..=2usize {
                let e = m.jones_projection(2 * k as u32).unwrap();
                for x in m.orbit_basis(Level::odd(k), Commutant::OfN) {
                    let lhs = m.matmul(&m.matmul(&e, &m.odd_to_even(&x).unwrap()).unwrap(), &e).unwrap();
                    let ex = m.odd_to_even(&m.theta_inclusion(&m.cond_exp_m(&x).unwrap()).unwrap()).unwrap();
                    assert_eq!(lhs, m.matmul(&ex, &e).unwrap());
                }
            }
        }
    }

    #[test]
    fn commutant_bases_commute_with_theta() {
        for name in ["S3:S2", "S3:A3", "C4:C2"] {
            let m = model(name);
            let g = m.group();
            for level in levels(2) {
                for (flavor, acting) in
                    [(Commutant::OfN, m.cosets().subgroup().members().to_vec()), (Commutant::OfM, g.elements().collect())]
                {
                    let basis = m.orbit_basis(level, flavor);
                    assert_eq!(basis.len(), m.commutant_dimension(level, flavor), "{name} {level}");
                    for b in &basis {
                        m.coefficients(b, flavor).unwrap();
                        for &h in &acting {
                            assert_eq!(m.theta_power(h, level.tuple_len).conjugate(b, g), *b);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn dimensions_match_orbit_counts() {
        let m = model("S3:S2");
        let dims: Vec<usize> = (1..=5).map(|c| m.dimension(Color::Positive(c))).collect();
        assert_eq!(dims, alloc::vec![1, 2, 5, 14, 41]);
        let a = model("S3:A3");
        let dims: Vec<usize> = (1..=5).map(|c| a.dimension(Color::Positive(c))).collect();
        assert_eq!(dims, alloc::vec![1, 2, 4, 8, 16]);
    }

    #[test]
    fn membership_rejects_non_commutant_matrices() {
        let m = model("S3:S2");
        let x = m.basis_ev(&[1], &[2]);
        assert!(matches!(m.coefficients(&x, Commutant::OfN), Err(Error::NotRelativeCommutant(_))));
        let mut wrong_label = GroupAlgebraMatrix::zero(Level::even(1), 3);
        wrong_label.add_term(0, 0, m.group().generators()[0], Rational::one());
        assert!(m.coefficients(&wrong_label, Commutant::OfN).is_err());
        let mut off_y = GroupAlgebraMatrix::zero(Level::odd(1), 3);
        off_y.add_term(0, 1, m.entry_label(&[0], &[1]), Rational::one());
        assert!(m.coefficients(&off_y, Commutant::OfN).is_err());
    }

    #[test]
    fn trace_values() {
        for name in ["S3:S2", "S4:S3", "C4:C2"] {
            let m = model(name);
            let h = m.cosets().subgroup().order() as i128;
            let n = m.index() as i128;
            for r in 0..=2usize {
                assert_eq!(m.trace(&m.identity(Level::even(r))), Rational::one());
                for orbit in m.pair_orbits(Level::even(r), Commutant::OfN).members {
                    let (a, b) = orbit[0];
                    let codec = m.codec(r);
                    let (i, j) = (codec.decode(a as usize), codec.decode(b as usize));
                    let mut sum = GroupAlgebraMatrix::zero(Level::even(r), m.index());
                    for &x in m.cosets().subgroup().members() {
                        sum.add_scaled(&m.basis_ev(&m.cosets().beta_k(x, &i), &m.cosets().beta_k(x, &j)), Rational::one()).unwrap();
                    }
                    let expected = if i == j { q(h, n.pow(r as u32)) } else { Rational::zero() };
                    assert_eq!(m.trace(&sum), expected);
                }
            }
        }
    }

    #[test]
    fn trace_is_tracial_and_positive_definite() {
        let m = model("S3:S2");
        for level in levels(2) {
            let basis = m.orbit_basis(level, Commutant::OfN);
            let gram: Vec<Vec<Rational>> =
                basis.iter().map(|a| basis.iter().map(|b| m.trace(&m.matmul(&m.adjoint(a), b).unwrap())).collect()).collect();
            assert!(is_positive_definite(&gram), "{level}");
            for a in &basis {
                for b in &basis {
                    assert_eq!(m.trace(&m.matmul(a, b).unwrap()), m.trace(&m.matmul(b, a).unwrap()));
                }
            }
        }
    }

    #[test]
    fn commutant_expectation_is_idempotent_onto_m_prime() {
        let m = model("S3:S2");
        for level in levels(2) {
            for a in m.orbit_basis(level, Commutant::OfN) {
                let e = m.cond_exp_commutant(&a);
                assert_eq!(m.cond_exp_commutant(&e), e);
                assert_eq!(m.trace(&e), m.trace(&a));
                m.coefficients(&e, Commutant::OfM).unwrap();
            }
        }
    }

    #[test]
    fn element_level_tangles() {
        let m = model("S3:S2");
        let one = m.unit(Color::ZeroPlus);
        let up = m.include(&one).unwrap();
        assert_eq!(up, m.unit(Color::Positive(1)));
        let down = m.cond_exp(&up, false).unwrap();
        assert_eq!(down.color(), Color::ZeroPlus);
        assert_eq!(down.as_scalar(), Some(Scalar::sqrt_int(3)));
        assert_eq!(m.trace_element(&m.jones_element(Color::Positive(2)).unwrap()), Scalar::sqrt_int(3) * Scalar::ratio(1, 3));
        assert!(m.multiply(&one, &up).is_err());
        assert!(m.jones_element(Color::Positive(1)).is_err());
        let x = m.unit(Color::Positive(2));
        assert!(x.plus(&x.scaled(&Scalar::sqrt_int(3))).is_err());
        assert_eq!(x.plus(&x).unwrap(), x.scaled(&Scalar::from_int(2)));
    }
}
