use alloc::collections::{BTreeMap, VecDeque};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::perm::Perm;
use crate::error::{Error, Result};

/// Default closure bound for [`FiniteGroup::generate`].
pub const DEFAULT_MAX_ORDER: usize = 10_000;

/// Full multiplication tables are kept up to this order; larger groups
/// multiply by composing permutations and looking the result up.
const TABLE_LIMIT: usize = 2048;

/// Index of a group element. The identity is always `Elem(0)`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Elem(pub u32);

impl Elem {
    pub const IDENTITY: Elem = Elem(0);

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Debug)]
pub struct FiniteGroup {
    degree: usize,
    elements: Vec<Perm>,
    lookup: BTreeMap<Perm, Elem>,
    table: Option<Vec<u32>>,
    inverse: Vec<Elem>,
    generators: Vec<Elem>,
}

impl FiniteGroup {
    /// Closure of `generators` under composition, enumerated breadth-first
    /// from the identity.
    pub fn generate(generators: &[Perm], max_order: usize) -> Result<FiniteGroup> {
        let degree = generators.iter().map(Perm::degree).max().unwrap_or(0);
        let gens: Vec<Perm> = generators.iter().map(|g| g.extended(degree)).collect();
        let identity = Perm::identity(degree);
        let mut elements = alloc::vec![identity.clone()];
        let mut lookup = BTreeMap::new();
        lookup.insert(identity, Elem(0));
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for g in &gens {
                let y = elements[x].then(g);
                if !lookup.contains_key(&y) {
                    if elements.len() >= max_order {
                        return Err(Error::GroupTooLarge { limit: max_order });
                    }
                    lookup.insert(y.clone(), Elem(elements.len() as u32));
                    elements.push(y);
                    queue.push_back(elements.len() - 1);
                }
            }
        }
        let generators = gens.iter().map(|g| lookup[g]).collect();
        let inverse = elements.iter().map(|p| lookup[&p.inverse()]).collect();
        let mut group = FiniteGroup { degree, elements, lookup, table: None, inverse, generators };
        if group.order() <= TABLE_LIMIT {
            let n = group.order();
            let mut table = Vec::with_capacity(n * n);
            for a in 0..n {
                for b in 0..n {
                    table.push(group.lookup[&group.elements[a].then(&group.elements[b])].0);
                }
            }
            group.table = Some(table);
        }
        Ok(group)
    }

    pub fn trivial() -> FiniteGroup {
        FiniteGroup::generate(&[], 1).expect("trivial group")
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn elements(&self) -> impl ExactSizeIterator<Item = Elem> + Clone {
        (0..self.elements.len() as u32).map(Elem)
    }

    pub fn generators(&self) -> &[Elem] {
        &self.generators
    }

    pub fn perm(&self, g: Elem) -> &Perm {
        &self.elements[g.index()]
    }

    pub fn find(&self, p: &Perm) -> Option<Elem> {
        self.lookup.get(&p.extended(self.degree)).copied()
    }

    /// `a·b` (apply `a`, then `b`).
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        match &self.table {
            Some(t) => Elem(t[a.index() * self.order() + b.index()]),
            None => self.lookup[&self.elements[a.index()].then(&self.elements[b.index()])],
        }
    }

    pub fn inv(&self, g: Elem) -> Elem {
        self.inverse[g.index()]
    }

    pub fn product(&self, factors: impl IntoIterator<Item = Elem>) -> Elem {
        factors.into_iter().fold(Elem::IDENTITY, |acc, g| self.mul(acc, g))
    }

    pub fn conjugate(&self, x: Elem, by: Elem) -> Elem {
        self.mul(self.mul(by, x), self.inv(by))
    }
}

/// A subgroup of a [`FiniteGroup`], stored by membership.
#[derive(Clone, Debug)]
pub struct Subgroup {
    members: Vec<Elem>,
    contains: Vec<bool>,
    generators: Vec<Elem>,
}

impl Subgroup {
    pub fn generated_by(group: &FiniteGroup, generators: &[Elem]) -> Subgroup {
        let mut contains = alloc::vec![false; group.order()];
        contains[0] = true;
        let mut members = alloc::vec![Elem::IDENTITY];
        let mut queue = VecDeque::from([Elem::IDENTITY]);
        while let Some(x) = queue.pop_front() {
            for &s in generators {
                let y = group.mul(x, s);
                if !contains[y.index()] {
                    contains[y.index()] = true;
                    members.push(y);
                    queue.push_back(y);
                }
            }
        }
        members.sort();
        Subgroup { members, contains, generators: generators.to_vec() }
    }

    pub fn from_perms(group: &FiniteGroup, generators: &[Perm]) -> Result<Subgroup> {
        let gens = generators.iter().map(|p| group.find(p).ok_or(Error::NotInGroup)).collect::<Result<Vec<_>>>()?;
        Ok(Subgroup::generated_by(group, &gens))
    }

    /// Validate an explicit element set.
    pub fn from_elements(group: &FiniteGroup, elements: &[Elem]) -> Result<Subgroup> {
        let mut contains = alloc::vec![false; group.order()];
        for &e in elements {
            contains[e.index()] = true;
        }
        if !contains[0] {
            return Err(Error::NotASubgroup(String::from("missing identity")));
        }
        for &a in elements {
            if !contains[group.inv(a).index()] {
                return Err(Error::NotASubgroup(String::from("not closed under inverses")));
            }
            for &b in elements {
                if !contains[group.mul(a, b).index()] {
                    return Err(Error::NotASubgroup(String::from("not closed under multiplication")));
                }
            }
        }
        let mut members: Vec<Elem> = elements.to_vec();
        members.sort();
        members.dedup();
        Ok(Subgroup { generators: members.clone(), members, contains })
    }

    pub fn whole(group: &FiniteGroup) -> Subgroup {
        Subgroup::generated_by(group, group.generators())
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn members(&self) -> &[Elem] {
        &self.members
    }

    pub fn generators(&self) -> &[Elem] {
        &self.generators
    }

    pub fn contains(&self, g: Elem) -> bool {
        self.contains[g.index()]
    }
}

/// A conjugacy class of `G` with the size of its intersection with `H`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugacyClass {
    pub members: Vec<Elem>,
    pub in_subgroup: usize,
}

pub fn conjugacy_classes(group: &FiniteGroup, subgroup: &Subgroup) -> Vec<ConjugacyClass> {
    let mut assigned = alloc::vec![false; group.order()];
    let mut classes = Vec::new();
    for x in group.elements() {
        if assigned[x.index()] {
            continue;
        }
        let mut members = Vec::new();
        for g in group.elements() {
            let y = group.conjugate(x, g);
            if !assigned[y.index()] {
                assigned[y.index()] = true;
                members.push(y);
            }
        }
        members.sort();
        let in_subgroup = members.iter().filter(|&&m| subgroup.contains(m)).count();
        classes.push(ConjugacyClass { members, in_subgroup });
    }
    classes
}

impl fmt::Display for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("<")?;
        for (i, g) in self.generators.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}", self.perm(*g))?;
        }
        write!(f, "> of order {}", self.order())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perms(texts: &[&str]) -> Vec<Perm> {
        texts.iter().map(|t| t.parse().unwrap()).collect()
    }

    #[test]
    fn orders_of_small_groups() {
        assert_eq!(FiniteGroup::generate(&[], 10).unwrap().order(), 1);
        assert_eq!(FiniteGroup::generate(&perms(&["(1 2)"]), 10).unwrap().order(), 2);
        assert_eq!(FiniteGroup::generate(&perms(&["(1 2)", "(1 2 3)"]), 10).unwrap().order(), 6);
        assert_eq!(FiniteGroup::generate(&perms(&["(1 2)", "(1 2 3 4 5)"]), 1000).unwrap().order(), 120);
    }

    #[test]
    fn size_bound_is_enforced() {
        let err = FiniteGroup::generate(&perms(&["(1 2)", "(1 2 3 4 5)"]), 50).unwrap_err();
        assert_eq!(err, Error::GroupTooLarge { limit: 50 });
    }

    #[test]
    fn group_axioms_exhaustive() {
        for gens in [&["(1 2)", "(1 2 3 4)"][..], &["(1 2 3)", "(2 3 4)"], &["(1 2 3 4 5)", "(2 5)(3 4)"]] {
            let g = FiniteGroup::generate(&perms(gens), 200).unwrap();
            for a in g.elements() {
                assert_eq!(g.mul(a, Elem::IDENTITY), a);
                assert_eq!(g.mul(Elem::IDENTITY, a), a);
                assert_eq!(g.mul(a, g.inv(a)), Elem::IDENTITY);
                for b in g.elements() {
                    for c in g.elements() {
                        assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn subgroup_validation() {
        let g = FiniteGroup::generate(&perms(&["(1 2)", "(1 2 3)"]), 10).unwrap();
        let h = Subgroup::from_perms(&g, &perms(&["(1 2)"])).unwrap();
        assert_eq!(h.order(), 2);
        let t = g.find(&"(1 2)".parse().unwrap()).unwrap();
        let c = g.find(&"(1 2 3)".parse().unwrap()).unwrap();
        assert!(Subgroup::from_elements(&g, &[Elem::IDENTITY, t]).is_ok());
        assert!(Subgroup::from_elements(&g, &[Elem::IDENTITY, c]).is_err());
        assert!(Subgroup::from_perms(&g, &perms(&["(1 4)"])).is_err());
    }

    #[test]
    fn conjugacy_classes_of_s3() {
        let g = FiniteGroup::generate(&perms(&["(1 2)", "(1 2 3)"]), 10).unwrap();
        let h = Subgroup::from_perms(&g, &perms(&["(1 2)"])).unwrap();
        let mut sizes: Vec<_> = conjugacy_classes(&g, &h).iter().map(|c| (c.members.len(), c.in_subgroup)).collect();
        sizes.sort();
        assert_eq!(sizes, alloc::vec![(1, 1), (2, 0), (3, 1)]);
        let abelian = FiniteGroup::generate(&perms(&["(1 2 3 4)"]), 10).unwrap();
        let whole = Subgroup::whole(&abelian);
        let classes = conjugacy_classes(&abelian, &whole);
        assert_eq!(classes.len(), 4);
        assert_eq!(classes.iter().map(|c| c.members.len()).sum::<usize>(), 4);
    }
}
