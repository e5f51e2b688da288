use alloc::collections::{BTreeMap, VecDeque};
use alloc::vec::Vec;

use super::finite::Elem;
use crate::error::{Error, Result};

/// Orbit partition of a finite domain. Orbits are listed in order of their
/// representatives, each the least element of its orbit.
#[derive(Clone, Debug)]
pub struct Orbits<T> {
    pub members: Vec<Vec<T>>,
    orbit_of: BTreeMap<T, usize>,
}

impl<T: Ord + Clone> Orbits<T> {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn representatives(&self) -> impl Iterator<Item = &T> {
        self.members.iter().map(|m| &m[0])
    }

    pub fn orbit_of(&self, x: &T) -> Option<usize> {
        self.orbit_of.get(x).copied()
    }
}

/// Orbits of the group generated by `generators` acting through `act`.
///
/// Errors if some image leaves the domain.
pub fn orbits<T: Ord + Clone>(domain: impl IntoIterator<Item = T>, generators: &[Elem], act: impl Fn(Elem, &T) -> T) -> Result<Orbits<T>> {
    let mut orbit_of: BTreeMap<T, usize> = domain.into_iter().map(|x| (x, usize::MAX)).collect();
    let points: Vec<T> = orbit_of.keys().cloned().collect();
    let mut members: Vec<Vec<T>> = Vec::new();
    for start in points {
        if orbit_of[&start] != usize::MAX {
            continue;
        }
        let id = members.len();
        *orbit_of.get_mut(&start).expect("domain point") = id;
        let mut orbit = alloc::vec![start.clone()];
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            for &g in generators {
                let y = act(g, &x);
                match orbit_of.get_mut(&y) {
                    None => return Err(Error::NotActionClosed),
                    Some(slot) if *slot == usize::MAX => {
                        *slot = id;
                        orbit.push(y.clone());
                        queue.push_back(y);
                    }
                    Some(_) => {}
                }
            }
        }
        orbit.sort();
        members.push(orbit);
    }
    Ok(Orbits { members, orbit_of })
}

/// `Iso_K(x) = { k ∈ K : k·x = x }`.
pub fn isotropy<T: PartialEq>(elements: impl IntoIterator<Item = Elem>, x: &T, act: impl Fn(Elem, &T) -> T) -> Vec<Elem> {
    elements.into_iter().filter(|&k| act(k, x) == *x).collect()
}

/// Number of orbits by Burnside's lemma: the average number of fixed points.
pub fn burnside_count<T: PartialEq>(elements: &[Elem], domain: &[T], act: impl Fn(Elem, &T) -> T) -> Result<usize> {
    let fixed: usize = elements.iter().map(|&g| domain.iter().filter(|x| act(g, x) == **x).count()).sum();
    if elements.is_empty() || !fixed.is_multiple_of(elements.len()) {
        return Err(Error::Inconsistent(alloc::format!("fixed-point total {fixed} not divisible by group order {}", elements.len())));
    }
    Ok(fixed / elements.len())
}

/// Orbit counts from the partition and from Burnside's lemma.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrbitCount {
    pub partition: usize,
    pub burnside: usize,
}

impl OrbitCount {
    pub fn agree(&self) -> bool {
        self.partition == self.burnside
    }
}

pub fn count_orbits<T: Ord + Clone>(
    elements: &[Elem],
    generators: &[Elem],
    domain: &[T],
    act: impl Fn(Elem, &T) -> T,
) -> Result<OrbitCount> {
    let partition = orbits(domain.iter().cloned(), generators, &act)?.len();
    let burnside = burnside_count(elements, domain, &act)?;
    Ok(OrbitCount { partition, burnside })
}
