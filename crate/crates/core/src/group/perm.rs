use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::Error;

/// A permutation of `{0, …, degree-1}`, stored as its image list.
///
/// Products compose left to right: `a.then(&b)` applies `a` first.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Perm {
    images: Vec<u32>,
}

impl Perm {
    pub fn identity(degree: usize) -> Perm {
        Perm { images: (0..degree as u32).collect() }
    }

    pub fn from_images(images: Vec<u32>) -> Result<Perm, Error> {
        let mut seen = alloc::vec![false; images.len()];
        for &i in &images {
            let slot = seen.get_mut(i as usize).ok_or_else(|| bad(&images, "image out of range"))?;
            if *slot {
                return Err(bad(&images, "repeated image"));
            }
            *slot = true;
        }
        Ok(Perm { images })
    }

    /// Build from disjoint cycles over 0-based points.
    pub fn from_cycles(degree: usize, cycles: &[Vec<u32>]) -> Result<Perm, Error> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut moved = alloc::vec![false; degree];
        for cycle in cycles {
            for (pos, &p) in cycle.iter().enumerate() {
                let p = p as usize;
                if p >= degree {
                    return Err(Error::BadPermutation { text: alloc::format!("{cycles:?}"), reason: "point exceeds degree".into() });
                }
                if moved[p] {
                    return Err(Error::BadPermutation { text: alloc::format!("{cycles:?}"), reason: "cycles are not disjoint".into() });
                }
                moved[p] = true;
                images[p] = cycle[(pos + 1) % cycle.len()];
            }
        }
        Ok(Perm { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, point: u32) -> u32 {
        self.images.get(point as usize).copied().unwrap_or(point)
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    /// Same permutation acting on a larger ground set.
    pub fn extended(&self, degree: usize) -> Perm {
        let mut images = self.images.clone();
        images.extend(images.len() as u32..degree.max(images.len()) as u32);
        Perm { images }
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Perm) -> Perm {
        let degree = self.degree().max(other.degree());
        Perm { images: (0..degree as u32).map(|x| other.apply(self.apply(x))).collect() }
    }

    pub fn inverse(&self) -> Perm {
        let mut images = alloc::vec![0; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            images[j as usize] = i as u32;
        }
        Perm { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i as u32 == j)
    }

    /// Disjoint cycles of length ≥ 2, each starting at its least point.
    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let mut seen = alloc::vec![false; self.images.len()];
        let mut out = Vec::new();
        for start in 0..self.images.len() {
            if seen[start] || self.images[start] as usize == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                cycle.push(p as u32);
                p = self.images[p] as usize;
            }
            out.push(cycle);
        }
        out
    }
}

fn bad(images: &[u32], reason: &str) -> Error {
    Error::BadPermutation { text: alloc::format!("{images:?}"), reason: reason.to_string() }
}

/// Cycle notation with 1-based points, `()` for the identity.
impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for c in cycles {
            f.write_str("(")?;
            for (i, p) in c.iter().enumerate() {
                if i > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{}", p + 1)?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// Parses cycle notation such as `(1 2)(3 4 5)`, `(1,2,3)` or `()`.
/// The degree is the largest point mentioned.
impl FromStr for Perm {
    type Err = Error;

    fn from_str(text: &str) -> Result<Perm, Error> {
        let err = |reason: &str| Error::BadPermutation { text: String::from(text), reason: reason.to_string() };
        let mut cycles: Vec<Vec<u32>> = Vec::new();
        let mut rest = text.trim();
        while !rest.is_empty() {
            let body = rest.strip_prefix('(').ok_or_else(|| err("expected `(`"))?;
            let close = body.find(')').ok_or_else(|| err("unclosed cycle"))?;
            let mut cycle = Vec::new();
            for tok in body[..close].split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()) {
                let p: u32 = tok.parse().map_err(|_| err("points must be positive integers"))?;
                if p == 0 {
                    return Err(err("points are 1-based"));
                }
                cycle.push(p - 1);
            }
            if cycle.len() > 1 {
                cycles.push(cycle);
            }
            rest = body[close + 1..].trim_start();
        }
        let degree = cycles.iter().flatten().map(|&p| p as usize + 1).max().unwrap_or(0);
        Perm::from_cycles(degree, &cycles).map_err(|_| err("cycles are not disjoint"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print_roundtrip() {
        for text in ["()", "(1 2)", "(1 2 3)(4 5)", "(2 4)"] {
            let p: Perm = text.parse().unwrap();
            assert_eq!(alloc::format!("{p}"), text);
        }
        let p: Perm = "(1,3, 2)".parse().unwrap();
        assert_eq!(alloc::format!("{p}"), "(1 3 2)");
        assert!("(1 2".parse::<Perm>().is_err());
        assert!("(1 2)(2 3)".parse::<Perm>().is_err());
        assert!("(0 1)".parse::<Perm>().is_err());
    }

    #[test]
    fn composition_is_left_to_right() {
        let a: Perm = "(1 2)".parse().unwrap();
        let b: Perm = "(2 3)".parse().unwrap();
        // 1 -a-> 2 -b-> 3
        assert_eq!(a.then(&b).apply(0), 2);
        assert!(a.then(&a.inverse()).is_identity());
    }
}
