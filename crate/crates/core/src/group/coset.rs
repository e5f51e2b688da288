use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use super::finite::{Elem, FiniteGroup, Subgroup};

/// Right cosets `H g_1, …, H g_n` of `H` in `G`, with `g_1 = e`.
///
/// Coset indices are 0-based here; the first coset is `H` itself. Each
/// representative is the least-indexed element of its coset.
#[derive(Clone, Debug)]
pub struct CosetSpace {
    group: FiniteGroup,
    subgroup: Subgroup,
    reps: Vec<Elem>,
    coset_of: Vec<u32>,
    beta1: Vec<u32>,
}

impl CosetSpace {
    pub fn new(group: FiniteGroup, subgroup: Subgroup) -> CosetSpace {
        let mut coset_of = alloc::vec![u32::MAX; group.order()];
        let mut reps = Vec::new();
        for x in group.elements() {
            if coset_of[x.index()] != u32::MAX {
                continue;
            }
            let idx = reps.len() as u32;
            reps.push(x);
            for &h in subgroup.members() {
                coset_of[group.mul(h, x).index()] = idx;
            }
        }
        let n = reps.len();
        let mut beta1 = Vec::with_capacity(group.order() * n);
        for g in group.elements() {
            let g_inv = group.inv(g);
            for &r in &reps {
                beta1.push(coset_of[group.mul(r, g_inv).index()]);
            }
        }
        CosetSpace { group, subgroup, reps, coset_of, beta1 }
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    /// The index `n = [G : H]`.
    pub fn index(&self) -> usize {
        self.reps.len()
    }

    pub fn reps(&self) -> &[Elem] {
        &self.reps
    }

    pub fn rep(&self, i: u32) -> Elem {
        self.reps[i as usize]
    }

    pub fn coset_of(&self, g: Elem) -> u32 {
        self.coset_of[g.index()]
    }

    /// The `j` with `H g_i g⁻¹ = H g_j`.
    pub fn beta1(&self, g: Elem, i: u32) -> u32 {
        self.beta1[g.index() * self.index() + i as usize]
    }

    /// `g_{t_1} g_{t_2} ⋯ g_{t_k}`.
    pub fn tuple_product(&self, t: &[u32]) -> Elem {
        self.group.product(t.iter().map(|&i| self.rep(i)))
    }

    /// Cosets of the suffix products: entry `m-1` is the coset of
    /// `g_{t_{k-m+1}} ⋯ g_{t_k}`.
    pub fn suffix_cosets(&self, t: &[u32]) -> Vec<u32> {
        let mut out = Vec::with_capacity(t.len());
        let mut suffix = Elem::IDENTITY;
        for &i in t.iter().rev() {
            suffix = self.group.mul(self.rep(i), suffix);
            out.push(self.coset_of(suffix));
        }
        out
    }

    /// Inverse of [`CosetSpace::suffix_cosets`].
    pub fn tuple_from_suffix_cosets(&self, cosets: &[u32]) -> Vec<u32> {
        let k = cosets.len();
        let mut t = alloc::vec![0; k];
        let mut suffix = Elem::IDENTITY;
        for (m, &c) in cosets.iter().enumerate() {
            let entry = self.coset_of(self.group.mul(self.rep(c), self.group.inv(suffix)));
            t[k - 1 - m] = entry;
            suffix = self.group.mul(self.rep(entry), suffix);
        }
        t
    }

    /// The action `β^k`: every suffix coset of the result is the `β^1`-image
    /// of the corresponding suffix coset of `t`.
    pub fn beta_k(&self, g: Elem, t: &[u32]) -> Vec<u32> {
        let moved: Vec<u32> = self.suffix_cosets(t).into_iter().map(|c| self.beta1(g, c)).collect();
        self.tuple_from_suffix_cosets(&moved)
    }

    /// `Y_k`: pairs whose full products lie in the same right coset.
    pub fn y_set(&self, k: usize) -> BTreeSet<(Vec<u32>, Vec<u32>)> {
        let codec = TupleCodec::new(self.index(), k);
        let full: Vec<u32> = codec.iter().map(|t| self.coset_of(self.tuple_product(&t))).collect();
        let mut out = BTreeSet::new();
        for a in 0..codec.len() {
            for b in 0..codec.len() {
                if full[a] == full[b] {
                    out.insert((codec.decode(a), codec.decode(b)));
                }
            }
        }
        out
    }

    /// Whether `(i, j) ∈ Y_k`.
    pub fn in_y(&self, i: &[u32], j: &[u32]) -> bool {
        self.subgroup.contains(self.group.mul(self.tuple_product(i), self.group.inv(self.tuple_product(j))))
    }
}

/// Lexicographic encoding of `k`-tuples over `{0, …, n-1}` as integers, with
/// the first entry most significant.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TupleCodec {
    n: usize,
    k: usize,
}

impl TupleCodec {
    pub fn new(n: usize, k: usize) -> TupleCodec {
        TupleCodec { n, k }
    }

    pub fn len(&self) -> usize {
        self.n.pow(self.k as u32)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn encode(&self, t: &[u32]) -> usize {
        debug_assert_eq!(t.len(), self.k);
        t.iter().fold(0, |acc, &x| acc * self.n + x as usize)
    }

    pub fn decode(&self, mut code: usize) -> Vec<u32> {
        let mut t = alloc::vec![0; self.k];
        for slot in t.iter_mut().rev() {
            *slot = (code % self.n.max(1)) as u32;
            code /= self.n.max(1);
        }
        t
    }

    pub fn iter(&self) -> impl Iterator<Item = Vec<u32>> + '_ {
        (0..self.len()).map(move |c| self.decode(c))
    }
}
