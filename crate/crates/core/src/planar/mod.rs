//! The graph planar algebra P(Γ): colors, based loops, formal loop sums and
//! the generating tangle maps.

mod algebra;

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::str::FromStr;

pub use algebra::GraphPlanarAlgebra;

use crate::error::{Error, Result};
use crate::graph::BipartiteGraph;
use crate::scalar::Scalar;

/// Colors `0+`, `0-`, `1`, `2`, ….
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Color {
    ZeroPlus,
    ZeroMinus,
    Positive(u32),
}

impl Color {
    pub fn new(k: u32) -> Color {
        if k == 0 {
            Color::ZeroPlus
        } else {
            Color::Positive(k)
        }
    }

    /// Half the number of boundary points; 0 for `0±`.
    pub fn half_len(self) -> usize {
        match self {
            Color::Positive(k) => k as usize,
            _ => 0,
        }
    }

    pub fn is_zero(self) -> bool {
        !matches!(self, Color::Positive(_))
    }

    pub fn raised(self) -> Color {
        Color::Positive(self.half_len() as u32 + 1)
    }

    /// One color down. From color 1 the target is `0+` unless `minus`.
    pub fn lowered(self, minus: bool) -> Option<Color> {
        match self {
            Color::Positive(1) if minus => Some(Color::ZeroMinus),
            Color::Positive(1) => Some(Color::ZeroPlus),
            Color::Positive(k) if !minus => Some(Color::Positive(k - 1)),
            _ => None,
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Color::ZeroPlus => f.write_str("0+"),
            Color::ZeroMinus => f.write_str("0-"),
            Color::Positive(k) => write!(f, "{k}"),
        }
    }
}

impl FromStr for Color {
    type Err = Error;

    fn from_str(text: &str) -> Result<Color> {
        match text.trim() {
            "0+" | "0" => Ok(Color::ZeroPlus),
            "0-" => Ok(Color::ZeroMinus),
            t => t.parse::<u32>().map(Color::new).map_err(|_| Error::InvalidGraph(alloc::format!("`{t}` is not a color"))),
        }
    }
}

/// A based loop `(π, ε)`: `verts[i]` and `verts[i+1]` are joined by
/// `edges[i]` (indices mod the length). A color `0±` loop is a single vertex
/// with no edges.
///
/// Ordered by base vertex, then edge sequence.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Loop {
    verts: Vec<u32>,
    edges: Vec<u32>,
}

impl Loop {
    pub fn new(verts: Vec<u32>, edges: Vec<u32>) -> Loop {
        debug_assert!(verts.len() == edges.len() || (verts.len() == 1 && edges.is_empty()));
        Loop { verts, edges }
    }

    pub fn vertex_loop(v: u32) -> Loop {
        Loop { verts: alloc::vec![v], edges: Vec::new() }
    }

    /// Follow `edges` from `base`.
    pub fn from_edges(graph: &BipartiteGraph, base: u32, edges: Vec<u32>) -> Loop {
        let mut verts = Vec::with_capacity(edges.len());
        let mut v = base;
        for &e in &edges {
            verts.push(v);
            v = graph.other_end(e, v);
        }
        debug_assert_eq!(v, base);
        Loop { verts, edges }
    }

    /// Check alternation and incidence against a graph.
    pub fn is_valid(&self, graph: &BipartiteGraph) -> bool {
        if self.edges.is_empty() {
            return self.verts.len() == 1 && (self.verts[0] as usize) < graph.num_vertices();
        }
        let len = self.verts.len();
        len.is_multiple_of(2)
            && self.edges.len() == len
            && (0..len).all(|i| {
                let (a, b) = (self.verts[i], self.verts[(i + 1) % len]);
                (a as usize) < graph.num_vertices() && graph.is_even(a) == (i % 2 == 0) && (self.edges[i] as usize) < graph.num_edges() && {
                    let (u, w) = graph.endpoints(self.edges[i]);
                    (u, w) == (a, b) || (u, w) == (b, a)
                }
            })
    }

    pub fn base(&self) -> u32 {
        self.verts[0]
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn half_len(&self) -> usize {
        self.edges.len() / 2
    }

    /// `π_i`, indices mod the length.
    pub fn vertex(&self, i: usize) -> u32 {
        self.verts[i % self.verts.len()]
    }

    pub fn edge(&self, i: usize) -> u32 {
        self.edges[i % self.edges.len()]
    }

    pub fn vertices(&self) -> &[u32] {
        &self.verts
    }

    pub fn edges(&self) -> &[u32] {
        &self.edges
    }

    /// The loop traversed backwards from the same base.
    pub fn reversed(&self) -> Loop {
        let len = self.edges.len();
        if len == 0 {
            return self.clone();
        }
        let verts = (0..len).map(|i| self.verts[(len - i) % len]).collect();
        let edges = (0..len).map(|i| self.edges[len - 1 - i]).collect();
        Loop { verts, edges }
    }

    /// The loop based at `π_s`.
    pub fn rotated(&self, s: usize) -> Loop {
        let len = self.edges.len();
        let verts = (0..len).map(|i| self.verts[(i + s) % len]).collect();
        let edges = (0..len).map(|i| self.edges[(i + s) % len]).collect();
        Loop { verts, edges }
    }

    /// Image under vertex and edge maps.
    pub fn mapped(&self, vertex: impl Fn(u32) -> u32, edge: impl Fn(u32) -> u32) -> Loop {
        Loop { verts: self.verts.iter().map(|&v| vertex(v)).collect(), edges: self.edges.iter().map(|&e| edge(e)).collect() }
    }

    /// `[v0, e0, v1, e1, …]`.
    pub fn interleaved(&self) -> Vec<u32> {
        let mut out = Vec::with_capacity(2 * self.verts.len());
        for (i, &v) in self.verts.iter().enumerate() {
            out.push(v);
            if let Some(&e) = self.edges.get(i) {
                out.push(e);
            }
        }
        out
    }

    pub fn from_interleaved(items: &[u32]) -> Option<Loop> {
        if items.len() == 1 {
            return Some(Loop::vertex_loop(items[0]));
        }
        if items.is_empty() || !items.len().is_multiple_of(2) {
            return None;
        }
        let verts = items.iter().step_by(2).copied().collect();
        let edges = items.iter().skip(1).step_by(2).copied().collect();
        Some(Loop { verts, edges })
    }

    /// `(v0 -e0- v1 -e1- …)` with vertex names.
    pub fn describe(&self, graph: &BipartiteGraph) -> String {
        let mut s = String::from("(");
        for (i, &v) in self.verts.iter().enumerate() {
            s.push_str(graph.name(v));
            if let Some(e) = self.edges.get(i) {
                s.push_str(&alloc::format!(" -{}- ", e + 1));
            }
        }
        s.push(')');
        s
    }
}

impl Ord for Loop {
    fn cmp(&self, other: &Loop) -> Ordering {
        self.verts[0].cmp(&other.verts[0]).then_with(|| self.edges.cmp(&other.edges)).then_with(|| self.verts.cmp(&other.verts))
    }
}

impl PartialOrd for Loop {
    fn partial_cmp(&self, other: &Loop) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A finite linear combination of loops of one color.
#[derive(Clone, Debug)]
pub struct PAElement {
    color: Color,
    terms: BTreeMap<Loop, Scalar>,
}

impl PAElement {
    pub fn zero(color: Color) -> PAElement {
        PAElement { color, terms: BTreeMap::new() }
    }

    pub fn from_loop(color: Color, l: Loop) -> PAElement {
        let mut x = PAElement::zero(color);
        x.add_term(l, &Scalar::one());
        x
    }

    pub fn from_terms(color: Color, terms: impl IntoIterator<Item = (Loop, Scalar)>) -> PAElement {
        let mut x = PAElement::zero(color);
        for (l, c) in terms {
            x.add_term(l, &c);
        }
        x
    }

    pub fn color(&self) -> Color {
        self.color
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Loop, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, l: &Loop) -> Scalar {
        self.terms.get(l).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Add `c · l`, pruning a coefficient that cancels to zero.
    pub fn add_term(&mut self, l: Loop, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(l) {
            alloc::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            alloc::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// `self += c · other`.
    pub fn add_scaled(&mut self, other: &PAElement, c: &Scalar) -> Result<()> {
        self.expect_color(other.color)?;
        for (l, v) in &other.terms {
            self.add_term(l.clone(), &(v * c));
        }
        Ok(())
    }

    pub fn plus(&self, other: &PAElement) -> Result<PAElement> {
        let mut out = self.clone();
        out.add_scaled(other, &Scalar::one())?;
        Ok(out)
    }

    pub fn minus(&self, other: &PAElement) -> Result<PAElement> {
        let mut out = self.clone();
        out.add_scaled(other, &Scalar::from_int(-1))?;
        Ok(out)
    }

    pub fn scaled(&self, c: &Scalar) -> PAElement {
        let mut out = PAElement::zero(self.color);
        for (l, v) in &self.terms {
            out.add_term(l.clone(), &(v * c));
        }
        out
    }

    pub fn expect_color(&self, color: Color) -> Result<()> {
        if self.color == color {
            Ok(())
        } else {
            Err(Error::ColorMismatch { expected: self.color, got: color })
        }
    }

    /// If `self = c · other` for a scalar `c`, returns `c`.
    pub fn ratio_to(&self, other: &PAElement) -> Option<Scalar> {
        if self.color != other.color || self.terms.len() != other.terms.len() {
            return None;
        }
        let (l, v) = other.terms.iter().next()?;
        let c = self.terms.get(l)?.checked_div(v)?;
        (self == &other.scaled(&c)).then_some(c)
    }

    /// Coefficients as rationals, when all of them are.
    pub fn rational_terms(&self) -> Option<BTreeMap<Loop, crate::scalar::Rational>> {
        self.terms.iter().map(|(l, c)| c.as_rational().map(|r| (l.clone(), r))).collect()
    }

    pub fn describe(&self, graph: &BipartiteGraph) -> String {
        if self.terms.is_empty() {
            return String::from("0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(l, c)| alloc::format!("({c})·{}", l.describe(graph))).collect();
        parts.join(" + ")
    }
}

impl PartialEq for PAElement {
    fn eq(&self, other: &PAElement) -> bool {
        self.color == other.color
            && self.terms.len() == other.terms.len()
            && self.terms.iter().all(|(l, c)| other.terms.get(l).is_some_and(|d| c == d))
    }
}
