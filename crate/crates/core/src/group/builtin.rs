use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::coset::CosetSpace;
use super::finite::{FiniteGroup, Subgroup};
use super::perm::Perm;
use crate::error::{Error, Result};

/// A group together with a chosen subgroup, as named on the command line.
#[derive(Clone, Debug)]
pub struct GroupPair {
    pub group_name: String,
    pub subgroup_name: String,
    pub group: FiniteGroup,
    pub subgroup: Subgroup,
}

impl GroupPair {
    pub fn new(group_name: impl Into<String>, subgroup_name: impl Into<String>, group: FiniteGroup, subgroup: Subgroup) -> Self {
        GroupPair { group_name: group_name.into(), subgroup_name: subgroup_name.into(), group, subgroup }
    }

    pub fn into_coset_space(self) -> CosetSpace {
        CosetSpace::new(self.group, self.subgroup)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Family {
    Symmetric,
    Alternating,
    Cyclic,
    Dihedral,
}

fn parse_name(name: &str) -> Result<(Family, usize)> {
    let name = name.trim();
    let bad = || Error::BadPermutation { text: name.to_string(), reason: "expected S<n>, A<n>, C<n> or D<n>".into() };
    let mut chars = name.chars();
    let family = match chars.next().map(|c| c.to_ascii_uppercase()) {
        Some('S') => Family::Symmetric,
        Some('A') => Family::Alternating,
        Some('C') => Family::Cyclic,
        Some('D') => Family::Dihedral,
        _ => return Err(bad()),
    };
    let n: usize = chars.as_str().parse().map_err(|_| bad())?;
    if n == 0 || (family == Family::Dihedral && n < 2) {
        return Err(bad());
    }
    Ok((family, n))
}

fn cycle(points: impl IntoIterator<Item = u32>, degree: usize) -> Perm {
    let c: Vec<u32> = points.into_iter().collect();
    if c.len() < 2 {
        return Perm::identity(degree);
    }
    Perm::from_cycles(degree, &[c]).expect("valid cycle")
}

fn reflection(n: usize, degree: usize) -> Perm {
    let pairs: Vec<Vec<u32>> = (1..n as u32).map(|i| (i, n as u32 - i)).filter(|(a, b)| a < b).map(|(a, b)| alloc::vec![a, b]).collect();
    Perm::from_cycles(degree, &pairs).expect("valid reflection")
}

/// Natural generators of a family member on `{0, …, n-1}`.
fn natural_generators(family: Family, n: usize, degree: usize) -> Vec<Perm> {
    match family {
        Family::Symmetric => alloc::vec![cycle([0, 1].into_iter().filter(|_| n >= 2), degree), cycle(0..n as u32, degree)],
        Family::Alternating => (2..n as u32).map(|k| cycle([0, 1, k], degree)).collect(),
        Family::Cyclic => alloc::vec![cycle(0..n as u32, degree)],
        Family::Dihedral => alloc::vec![cycle(0..n as u32, degree), reflection(n, degree)],
    }
}

/// A named group `S<n>`, `A<n>`, `C<n>` or `D<n>` acting on `n` points.
pub fn builtin_group(name: &str, max_order: usize) -> Result<FiniteGroup> {
    let (family, n) = parse_name(name)?;
    FiniteGroup::generate(&natural_generators(family, n, n), max_order)
}

/// Parse `G:H` with builtin names. The subgroup is embedded canonically:
/// `C<m>`/`D<m>` inside `C<n>`/`D<n>` use the rotation `r^{n/m}`, every
/// other subgroup acts naturally on the first `m` points.
pub fn builtin_pair(spec: &str, max_order: usize) -> Result<GroupPair> {
    let (g_name, h_name) =
        spec.split_once(':').ok_or_else(|| Error::BadPermutation { text: spec.to_string(), reason: "expected `G:H`".into() })?;
    let (g_family, n) = parse_name(g_name)?;
    let (h_family, m) = parse_name(h_name)?;
    let group = builtin_group(g_name, max_order)?;
    let rotational = matches!(g_family, Family::Cyclic | Family::Dihedral) && matches!(h_family, Family::Cyclic | Family::Dihedral);
    let gens = if rotational && m > 1 {
        if n % m != 0 || (h_family == Family::Dihedral && g_family == Family::Cyclic) {
            return Err(Error::NotASubgroup(alloc::format!("{h_name} does not embed in {g_name}")));
        }
        let step = (n / m) as u32;
        let mut gens = Vec::new();
        let r = cycle(0..n as u32, n);
        let mut rot = Perm::identity(n);
        for _ in 0..step {
            rot = rot.then(&r);
        }
        gens.push(rot);
        if h_family == Family::Dihedral {
            gens.push(reflection(n, n));
        }
        gens
    } else {
        if m > n.max(1) {
            return Err(Error::NotASubgroup(alloc::format!("{h_name} does not embed in {g_name}")));
        }
        natural_generators(h_family, m, n)
    };
    let subgroup =
        Subgroup::from_perms(&group, &gens).map_err(|_| Error::NotASubgroup(alloc::format!("{h_name} does not embed in {g_name}")))?;
    Ok(GroupPair::new(g_name.trim(), h_name.trim(), group, subgroup))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_orders() {
        for (name, order) in [("S1", 1), ("S3", 6), ("S4", 24), ("A4", 12), ("A3", 3), ("C4", 4), ("D4", 8), ("C1", 1), ("D3", 6)] {
            assert_eq!(builtin_group(name, 1000).unwrap().order(), order, "{name}");
        }
    }

    #[test]
    fn builtin_pairs() {
        for (spec, g, h) in [
            ("S3:S2", 6, 2),
            ("S3:A3", 6, 3),
            ("C4:C2", 4, 2),
            ("S4:S3", 24, 6),
            ("C1:C1", 1, 1),
            ("D4:C2", 8, 2),
            ("D4:D2", 8, 4),
            ("A4:C3", 12, 3),
        ] {
            let p = builtin_pair(spec, 1000).unwrap();
            assert_eq!((p.group.order(), p.subgroup.order()), (g, h), "{spec}");
        }
        assert!(builtin_pair("C4:C3", 1000).is_err());
        assert!(builtin_pair("A4:S3", 1000).is_err());
        assert!(builtin_pair("S3", 1000).is_err());
        assert!(builtin_pair("X3:S2", 1000).is_err());
    }
}
