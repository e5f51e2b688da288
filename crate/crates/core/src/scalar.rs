//! Scalars of the form Σ c_r · n^{r/4}, with a floating-point fallback.
//!
//! Exact values live in ℚ(y) with y = n^{1/4}. When `n` is a square the
//! polynomial y⁴ − n factors, so values are reduced into the true field:
//! y is rational when n = t⁴, and y² = s is folded in when n = s². After
//! that reduction, coefficient-wise equality is real equality.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_integer::Roots;
use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = Ratio<i128>;

/// Tolerance for equality once any operand is in float mode.
pub const FLOAT_TOLERANCE: f64 = 1e-10;

/// The number field a scalar lives in: ℚ[y]/(y^degree − base).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Radical {
    n: u64,
    degree: u8,
    base: i128,
}

impl Radical {
    const RATIONAL: Radical = Radical { n: 1, degree: 1, base: 1 };

    fn new(n: u64) -> Radical {
        assert!(n >= 1, "radicand must be positive");
        let s = n.sqrt();
        if s * s == n {
            let t = s.sqrt();
            if t * t == s {
                Radical { n, degree: 1, base: t as i128 }
            } else {
                Radical { n, degree: 2, base: s as i128 }
            }
        } else {
            Radical { n, degree: 4, base: n as i128 }
        }
    }

    fn is_rational(&self) -> bool {
        self.degree == 1
    }
}

#[derive(Clone, Debug)]
enum Repr {
    Exact { radical: Radical, coeffs: [Rational; 4] },
    Float(f64),
}

/// An exact quarter-power scalar or a float.
#[derive(Clone, Debug)]
pub struct Scalar(Repr);

fn zero4() -> [Rational; 4] {
    [Rational::zero(), Rational::zero(), Rational::zero(), Rational::zero()]
}

impl Scalar {
    pub fn zero() -> Scalar {
        Scalar::from_rational(Rational::zero())
    }

    pub fn one() -> Scalar {
        Scalar::from_rational(Rational::one())
    }

    pub fn from_int(v: i64) -> Scalar {
        Scalar::from_rational(Rational::from_integer(v as i128))
    }

    pub fn from_rational(r: Rational) -> Scalar {
        let mut coeffs = zero4();
        coeffs[0] = r;
        Scalar(Repr::Exact { radical: Radical::RATIONAL, coeffs })
    }

    pub fn ratio(num: i64, den: i64) -> Scalar {
        Scalar::from_rational(Rational::new(num as i128, den as i128))
    }

    pub fn from_f64(v: f64) -> Scalar {
        Scalar(Repr::Float(v))
    }

    /// `n^{p/4}` for any integer `p`.
    pub fn quarter_power(n: u64, p: i32) -> Scalar {
        let radical = Radical::new(n);
        let q = p.div_euclid(4);
        let r = p.rem_euclid(4) as usize;
        let nn = Rational::from_integer(n as i128);
        let factor = if q >= 0 { num_traits::pow(nn, q as usize) } else { num_traits::pow(nn.recip(), (-q) as usize) };
        let mut coeffs = zero4();
        coeffs[r] = factor;
        Scalar::reduced(radical, coeffs)
    }

    /// `sqrt(n)`.
    pub fn sqrt_int(n: u64) -> Scalar {
        Scalar::quarter_power(n, 2)
    }

    fn reduced(radical: Radical, mut c: [Rational; 4]) -> Scalar {
        match radical.degree {
            1 => {
                let t = Rational::from_integer(radical.base);
                let v = c[0] + t * (c[1] + t * (c[2] + t * c[3]));
                c = zero4();
                c[0] = v;
            }
            2 => {
                let s = Rational::from_integer(radical.base);
                c[0] += s * c[2];
                c[1] += s * c[3];
                c[2] = Rational::zero();
                c[3] = Rational::zero();
            }
            _ => {}
        }
        let radical = if c[1..].iter().all(Zero::is_zero) { Radical::RATIONAL } else { radical };
        Scalar(Repr::Exact { radical, coeffs: c })
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.0, Repr::Exact { .. })
    }

    pub fn is_zero(&self) -> bool {
        match &self.0 {
            Repr::Exact { coeffs, .. } => coeffs.iter().all(Zero::is_zero),
            Repr::Float(v) => v.abs() <= FLOAT_TOLERANCE,
        }
    }

    /// The rational value, when the scalar is exact and rational.
    pub fn as_rational(&self) -> Option<Rational> {
        match &self.0 {
            Repr::Exact { radical, coeffs } if radical.is_rational() => Some(coeffs[0]),
            _ => None,
        }
    }

    /// Coefficients `[c0, c1, c2, c3]` of `Σ c_r n^{r/4}` and the radicand `n`
    /// (1 for rational values).
    pub fn exact_parts(&self) -> Option<(u64, [Rational; 4])> {
        match &self.0 {
            Repr::Exact { radical, coeffs } => Some((radical.n, *coeffs)),
            Repr::Float(_) => None,
        }
    }

    pub fn from_exact_parts(n: u64, coeffs: [Rational; 4]) -> Scalar {
        Scalar::reduced(Radical::new(n), coeffs)
    }

    pub fn to_f64(&self) -> f64 {
        match &self.0 {
            Repr::Float(v) => *v,
            Repr::Exact { radical, coeffs } => {
                let y = libm::sqrt(libm::sqrt(radical.n as f64));
                let mut acc = 0.0;
                let mut p = 1.0;
                for c in coeffs {
                    acc += rational_to_f64(c) * p;
                    p *= y;
                }
                acc
            }
        }
    }

    pub fn is_positive(&self) -> bool {
        !self.is_zero() && self.to_f64() > 0.0
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        match &self.0 {
            Repr::Float(v) => Some(Scalar::from_f64(1.0 / v)),
            Repr::Exact { radical, coeffs } => {
                let d = radical.degree as usize;
                // Column j of the multiplication matrix is x·y^j reduced.
                let mut m = alloc::vec![alloc::vec![Rational::zero(); d + 1]; d];
                for j in 0..d {
                    let mut basis = zero4();
                    basis[j] = Rational::one();
                    let col = mul_exact(*radical, coeffs, &basis);
                    for (i, row) in m.iter_mut().enumerate() {
                        row[j] = col[i];
                    }
                }
                m[0][d] = Rational::one();
                let sol = solve_augmented(m)?;
                let mut out = zero4();
                out[..d].copy_from_slice(&sol);
                Some(Scalar::reduced(*radical, out))
            }
        }
    }

    pub fn checked_div(&self, rhs: &Scalar) -> Option<Scalar> {
        rhs.inv().map(|r| self * &r)
    }

    pub fn pow(&self, e: i32) -> Scalar {
        let base = if e < 0 { self.inv().expect("zero to a negative power") } else { self.clone() };
        let mut acc = Scalar::one();
        for _ in 0..e.unsigned_abs() {
            acc *= &base;
        }
        acc
    }

    fn combine(
        &self,
        rhs: &Scalar,
        op: impl Fn(Radical, &[Rational; 4], &[Rational; 4]) -> [Rational; 4],
        fop: impl Fn(f64, f64) -> f64,
    ) -> Scalar {
        match (&self.0, &rhs.0) {
            (Repr::Exact { radical: ra, coeffs: ca }, Repr::Exact { radical: rb, coeffs: cb }) => {
                let radical = unify(*ra, *rb);
                Scalar::reduced(radical, op(radical, ca, cb))
            }
            _ => Scalar::from_f64(fop(self.to_f64(), rhs.to_f64())),
        }
    }
}

fn unify(a: Radical, b: Radical) -> Radical {
    if a.is_rational() {
        b
    } else if b.is_rational() || a.n == b.n {
        a
    } else {
        panic!("scalars over different radicands {} and {} cannot be combined", a.n, b.n)
    }
}

fn mul_exact(radical: Radical, a: &[Rational; 4], b: &[Rational; 4]) -> [Rational; 4] {
    let d = radical.degree as usize;
    let base = Rational::from_integer(radical.base);
    let mut out = zero4();
    for (i, x) in a.iter().enumerate().take(d) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(d) {
            if y.is_zero() {
                continue;
            }
            let p = *x * *y;
            if i + j >= d {
                out[i + j - d] += p * base;
            } else {
                out[i + j] += p;
            }
        }
    }
    out
}

/// Solve a square system given as an augmented matrix.
#[allow(clippy::needless_range_loop)]
fn solve_augmented(mut m: Vec<Vec<Rational>>) -> Option<Vec<Rational>> {
    let d = m.len();
    for col in 0..d {
        let pivot = (col..d).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        let inv = m[col][col].recip();
        for v in m[col].iter_mut() {
            *v *= inv;
        }
        for r in 0..d {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col];
                for c in col..=d {
                    let t = m[col][c];
                    m[r][c] -= f * t;
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[d]).collect())
}

pub(crate) fn rational_to_f64(r: &Rational) -> f64 {
    r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
}

/// Render a rational as `p` or `p/q`.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        alloc::format!("{}", r.numer())
    } else {
        alloc::format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parse `p` or `p/q`.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    match text.split_once('/') {
        Some((p, q)) => {
            let q: i128 = q.trim().parse().ok()?;
            if q == 0 {
                return None;
            }
            Some(Rational::new(p.trim().parse().ok()?, q))
        }
        None => Some(Rational::from_integer(text.parse().ok()?)),
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl From<Rational> for Scalar {
    fn from(r: Rational) -> Self {
        Scalar::from_rational(r)
    }
}

impl From<i64> for Scalar {
    fn from(v: i64) -> Self {
        Scalar::from_int(v)
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Scalar) -> bool {
        match (&self.0, &other.0) {
            (Repr::Exact { radical: ra, coeffs: ca }, Repr::Exact { radical: rb, coeffs: cb }) => {
                ca == cb && (ra.is_rational() || rb.is_rational() || ra.n == rb.n)
            }
            _ => {
                let (a, b) = (self.to_f64(), other.to_f64());
                (a - b).abs() <= FLOAT_TOLERANCE * a.abs().max(b.abs()).max(1.0)
            }
        }
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Scalar) -> Option<Ordering> {
        if self == other {
            Some(Ordering::Equal)
        } else {
            self.to_f64().partial_cmp(&other.to_f64())
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Float(v) => write!(f, "{v}"),
            Repr::Exact { radical, coeffs } => {
                let mut first = true;
                for (r, c) in coeffs.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    if !first {
                        f.write_str(if c.is_negative() { " - " } else { " + " })?;
                    } else if c.is_negative() {
                        f.write_str("-")?;
                    }
                    first = false;
                    let a = c.abs();
                    let surd = match r {
                        0 => None,
                        1 => Some(alloc::format!("{}^(1/4)", radical.n)),
                        2 => Some(alloc::format!("{}^(1/2)", radical.n)),
                        _ => Some(alloc::format!("{}^(3/4)", radical.n)),
                    };
                    match surd {
                        None => f.write_str(&format_rational(&a))?,
                        Some(s) if a.is_one() => f.write_str(&s)?,
                        Some(s) => write!(f, "{}*{}", format_rational(&a), s)?,
                    }
                }
                if first {
                    f.write_str("0")?;
                }
                Ok(())
            }
        }
    }
}

impl Add<&Scalar> for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.combine(rhs, |_, a, b| [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]], |x, y| x + y)
    }
}

impl Sub<&Scalar> for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self.combine(rhs, |_, a, b| [a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]], |x, y| x - y)
    }
}

impl Mul<&Scalar> for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.combine(rhs, mul_exact, |x, y| x * y)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match &self.0 {
            Repr::Float(v) => Scalar::from_f64(-v),
            Repr::Exact { radical, coeffs } => {
                Scalar(Repr::Exact { radical: *radical, coeffs: [-coeffs[0], -coeffs[1], -coeffs[2], -coeffs[3]] })
            }
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
        impl $tr<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn fourth_power_of_root_folds_to_integer() {
        for n in 1..20u64 {
            let y = Scalar::quarter_power(n, 1);
            let y4 = &(&y * &y) * &(&y * &y);
            assert_eq!(y4.as_rational(), Some(Rational::from_integer(n as i128)));
        }
    }

    #[test]
    fn square_radicands_reduce() {
        let y = Scalar::quarter_power(4, 1);
        assert_eq!(&y * &y, Scalar::from_int(2));
        assert!(Scalar::quarter_power(16, 3).as_rational() == Some(Rational::from_integer(8)));
        assert_eq!(Scalar::sqrt_int(9), Scalar::from_int(3));
        // sqrt(3) squared is 3, and 3^(1/4) is not rational.
        assert_eq!(Scalar::sqrt_int(3).pow(2), Scalar::from_int(3));
        assert!(Scalar::quarter_power(3, 1).as_rational().is_none());
    }

    #[test]
    fn negative_powers_and_inverse() {
        let a = Scalar::quarter_power(3, -3);
        let b = Scalar::quarter_power(3, 3);
        assert_eq!(&a * &b, Scalar::one());
        let x = &Scalar::one() + &Scalar::quarter_power(2, 1);
        let xi = x.inv().unwrap();
        assert_eq!(&x * &xi, Scalar::one());
        assert!(Scalar::zero().inv().is_none());
    }

    #[test]
    fn display() {
        assert_eq!(alloc::format!("{}", Scalar::quarter_power(3, 2)), "3^(1/2)");
        assert_eq!(alloc::format!("{}", Scalar::ratio(-1, 2)), "-1/2");
        let x = &Scalar::ratio(1, 3) - &Scalar::quarter_power(5, 1);
        assert_eq!(alloc::format!("{x}"), "1/3 - 5^(1/4)");
    }

    #[test]
    fn float_mode_uses_tolerance() {
        let a = Scalar::from_f64(core::f64::consts::SQRT_2);
        assert_eq!(a, Scalar::sqrt_int(2));
        assert!((&a * &a) == Scalar::from_int(2));
    }

    fn coeffs() -> impl Strategy<Value = [Rational; 4]> {
        prop::array::uniform4((-20i64..20, 1i64..6)).prop_map(|c| c.map(|(p, q)| Rational::new(p as i128, q as i128)))
    }

    proptest! {
        #[test]
        fn field_axioms(n in 1u64..18, ca in coeffs(), cb in coeffs(), cc in coeffs()) {
            let (a, b, c) = (
                Scalar::from_exact_parts(n, ca),
                Scalar::from_exact_parts(n, cb),
                Scalar::from_exact_parts(n, cc),
            );
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            if !a.is_zero() {
                prop_assert_eq!(&a * &a.inv().unwrap(), Scalar::one());
            }
            prop_assert!((&a - &a).is_zero());
            let f = (&a * &b).to_f64();
            prop_assert!((f - a.to_f64() * b.to_f64()).abs() < 1e-6 * f.abs().max(1.0));
        }
    }
}
