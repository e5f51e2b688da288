//! The `G`-action on P(Γ) and the invariant planar subalgebra P(Γ)^G.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::{check_pf, GraphAction, StarGraph};
use crate::group::{orbits, CosetSpace, Elem, Orbits};
use crate::linalg::rank;
use crate::planar::{Color, GraphPlanarAlgebra, Loop, PAElement};
use crate::scalar::{Rational, Scalar};

/// A graph planar algebra with a validated group action.
#[derive(Clone, Debug)]
pub struct InvariantContext {
    pa: GraphPlanarAlgebra,
    action: GraphAction,
}

/// A structural property computed two independent ways.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoRoutes<T> {
    pub by_group: T,
    pub by_algebra: T,
}

impl<T: PartialEq> TwoRoutes<T> {
    pub fn agree(&self) -> bool {
        self.by_group == self.by_algebra
    }
}

impl InvariantContext {
    /// Checks that each group generator commutes with every generating
    /// tangle map on all loops of colors `0±`, 1 and 2.
    pub fn new(pa: GraphPlanarAlgebra, action: GraphAction) -> Result<InvariantContext> {
        let ctx = InvariantContext { pa, action };
        for &g in ctx.action.generators() {
            ctx.check_automorphism(g, 2)?;
        }
        Ok(ctx)
    }

    /// P(⋆_n) with the coset action of `G`.
    pub fn star(cs: &CosetSpace) -> Result<InvariantContext> {
        let star = StarGraph::new(cs)?;
        let pa = GraphPlanarAlgebra::new(star.graph, star.spin)?;
        InvariantContext::new(pa, star.action)
    }

    pub fn algebra(&self) -> &GraphPlanarAlgebra {
        &self.pa
    }

    pub fn action(&self) -> &GraphAction {
        &self.action
    }

    /// The same action on the flipped graph.
    pub fn flip(&self) -> Result<InvariantContext> {
        InvariantContext::new(self.pa.flip(), self.action.flip(self.pa.graph()))
    }

    pub fn act_loop(&self, g: Elem, l: &Loop) -> Loop {
        l.mapped(|v| self.action.vertex(g, v), |e| self.action.edge(g, e))
    }

    pub fn act(&self, g: Elem, x: &PAElement) -> PAElement {
        PAElement::from_terms(x.color(), x.terms().map(|(l, c)| (self.act_loop(g, l), c.clone())))
    }

    /// `|G|^{-1} Σ_g g·x`.
    pub fn project(&self, x: &PAElement) -> PAElement {
        let mut out = PAElement::zero(x.color());
        let w = Scalar::ratio(1, self.action.order() as i64);
        for g in self.action.elements() {
            out.add_scaled(&self.act(g, x), &w).expect("same color");
        }
        out
    }

    pub fn is_invariant(&self, x: &PAElement) -> bool {
        self.action.generators().iter().all(|&g| self.act(g, x) == *x)
    }

    pub fn loop_orbits(&self, color: Color) -> Orbits<Loop> {
        orbits(self.pa.enumerate_loops(color), self.action.generators(), |g, l| self.act_loop(g, l))
            .expect("loops are permuted by the action")
    }

    /// Orbit sums `Σ_{g∈G} g(ℓ)`, one per orbit, ordered by representative.
    pub fn invariant_basis(&self, color: Color) -> Vec<PAElement> {
        let order = self.action.order();
        self.loop_orbits(color)
            .members
            .into_iter()
            .map(|orbit| {
                let mult = Scalar::from_int((order / orbit.len()) as i64);
                PAElement::from_terms(color, orbit.into_iter().map(|l| (l, mult.clone())))
            })
            .collect()
    }

    /// Coordinates of an invariant element in [`InvariantContext::invariant_basis`].
    pub fn orbit_coordinates(&self, x: &PAElement) -> Result<Vec<Scalar>> {
        let basis = self.invariant_basis(x.color());
        let coords: Vec<Scalar> = basis
            .iter()
            .map(|b| {
                let (rep, c) = b.terms().next().expect("non-empty orbit sum");
                x.coeff(rep).checked_div(c).expect("nonzero multiplicity")
            })
            .collect();
        let mut rebuilt = PAElement::zero(x.color());
        for (b, c) in basis.iter().zip(&coords) {
            rebuilt.add_scaled(b, c)?;
        }
        if rebuilt != *x {
            return Err(Error::Inconsistent(alloc::format!("element of color {} is not G-invariant", x.color())));
        }
        Ok(coords)
    }

    /// `dim P_k(Γ)^G` as the rank of the projections of all loops.
    pub fn dimension_by_rank(&self, color: Color) -> usize {
        let vectors: Vec<BTreeMap<Loop, Rational>> = self
            .pa
            .enumerate_loops(color)
            .into_iter()
            .map(|l| self.project(&PAElement::from_loop(color, l)).rational_terms().expect("projections are rational"))
            .collect();
        rank(&vectors)
    }

    pub fn dimension(&self, color: Color) -> usize {
        self.loop_orbits(color).len()
    }

    /// Connected: `G` is transitive on even and on odd vertices, versus
    /// `dim P_{0±}^G = 1`.
    pub fn is_connected(&self) -> TwoRoutes<bool> {
        let g = self.pa.graph();
        let transitive =
            |vs: Vec<u32>| orbits(vs, self.action.generators(), |x, &v| self.action.vertex(x, v)).map(|o| o.len() == 1).unwrap_or(false);
        let by_group = transitive(g.even_vertices().collect()) && transitive(g.odd_vertices().collect());
        let by_algebra = self.dimension_by_rank(Color::ZeroPlus) == 1 && self.dimension_by_rank(Color::ZeroMinus) == 1;
        TwoRoutes { by_group, by_algebra }
    }

    /// Modulus: `‖Γ‖` from the Perron-Frobenius check, versus the closed
    /// loop value read off `E(I(1_{0±}))` on both shadings.
    pub fn modulus(&self) -> TwoRoutes<Option<Scalar>> {
        let by_group = if self.is_connected().by_group { check_pf(self.pa.graph(), self.pa.spin()).ok().flatten() } else { None };
        let closed_loop = |color: Color, minus: bool| -> Option<Scalar> {
            let one = self.pa.unit(color);
            let z = self.pa.cond_exp(&self.pa.include(&one).ok()?, minus).ok()?;
            z.ratio_to(&one)
        };
        let by_algebra = match (closed_loop(Color::ZeroPlus, false), closed_loop(Color::ZeroMinus, true)) {
            (Some(a), Some(b)) if a == b && self.is_connected().by_algebra => Some(a),
            _ => None,
        };
        TwoRoutes { by_group, by_algebra }
    }

    /// Irreducible: connected and `G` transitive on 2-loops, versus
    /// `dim P_1^G = 1`.
    pub fn is_irreducible(&self) -> TwoRoutes<bool> {
        let connected = self.is_connected();
        let two_loops = self.pa.enumerate_loops(Color::Positive(1));
        let by_group = connected.by_group
            && orbits(two_loops, self.action.generators(), |g, l| self.act_loop(g, l)).map(|o| o.len() == 1).unwrap_or(false);
        let by_algebra = connected.by_algebra && self.dimension_by_rank(Color::Positive(1)) == 1;
        TwoRoutes { by_group, by_algebra }
    }

    /// `g` commutes with every generating tangle on loops up to `max_color`.
    pub fn check_automorphism(&self, g: Elem, max_color: u32) -> Result<()> {
        let pa = &self.pa;
        let fail = |what: &str, color: Color| {
            Err(Error::InvalidAction(alloc::format!("element {} does not commute with {what} at color {color}", g.0)))
        };
        let mut colors = alloc::vec![Color::ZeroPlus, Color::ZeroMinus];
        colors.extend((1..=max_color).map(Color::Positive));
        for &color in &colors {
            let basis: Vec<PAElement> = pa.enumerate_loops(color).into_iter().map(|l| PAElement::from_loop(color, l)).collect();
            if self.act(g, &pa.unit(color)) != pa.unit(color) {
                return fail("the unit", color);
            }
            if color.half_len() >= 2 && self.act(g, &pa.jones_element(color)?) != pa.jones_element(color)? {
                return fail("the Jones element", color);
            }
            for x in &basis {
                let gx = self.act(g, x);
                if color.half_len() < max_color as usize && self.act(g, &pa.include(x)?) != pa.include(&gx)? {
                    return fail("inclusion", color);
                }
                if self.act(g, &pa.adjoint(x)) != pa.adjoint(&gx) {
                    return fail("the adjoint", color);
                }
                for minus in [false, true] {
                    if color.lowered(minus).is_some() && self.act(g, &pa.cond_exp(x, minus)?) != pa.cond_exp(&gx, minus)? {
                        return fail("the conditional expectation", color);
                    }
                }
                if !color.is_zero() && self.act(g, &pa.cond_exp_prime(x)?) != pa.cond_exp_prime(&gx)? {
                    return fail("the dual conditional expectation", color);
                }
                for y in &basis {
                    if self.act(g, &pa.multiply(x, y)?) != pa.multiply(&gx, &self.act(g, y))? {
                        return fail("multiplication", color);
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{star_graph, star_spin};
    use crate::group::builtin_pair;

    fn ctx(name: &str) -> InvariantContext {
        InvariantContext::star(&builtin_pair(name, 1000).unwrap().into_coset_space()).unwrap()
    }

    #[test]
    fn zero_color_bases() {
        let c = ctx("S3:S2");
        let plus = c.invariant_basis(Color::ZeroPlus);
        assert_eq!(plus.len(), 1);
        assert_eq!(plus[0].ratio_to(&c.algebra().unit(Color::ZeroPlus)).unwrap(), Scalar::from_int(2));
        let minus = c.invariant_basis(Color::ZeroMinus);
        assert_eq!(minus.len(), 1);
        assert_eq!(minus[0].len(), 1);
    }

    #[test]
    fn dimensions_match_orbit_counts() {
        let c = ctx("S3:S2");
        let dims: Vec<usize> = (1..=5).map(|k| c.dimension(Color::Positive(k))).collect();
        assert_eq!(dims, alloc::vec![1, 2, 5, 14, 41]);
        for k in 1..=4 {
            assert_eq!(c.dimension_by_rank(Color::Positive(k)), dims[k as usize - 1]);
        }
        let a = ctx("S3:A3");
        let dims: Vec<usize> = (1..=5).map(|k| a.dimension(Color::Positive(k))).collect();
        assert_eq!(dims, alloc::vec![1, 2, 4, 8, 16]);
    }

    #[test]
    fn action_example_and_projection() {
        let c = ctx("S3:S2");
        let pa = c.algebra();
        let cs = builtin_pair("S3:S2", 100).unwrap().into_coset_space();
        for g in cs.group().elements() {
            for l in pa.enumerate_loops(Color::Positive(2)) {
                let (x, y) = (l.vertex(0), l.vertex(2));
                let image = c.act_loop(g, &l);
                assert_eq!((image.vertex(0), image.vertex(2)), (cs.beta1(g, x), cs.beta1(g, y)));
            }
        }
        for color in [Color::ZeroPlus, Color::Positive(1), Color::Positive(3)] {
            for b in c.invariant_basis(color) {
                assert_eq!(c.project(&b), b);
                assert!(c.is_invariant(&b));
                let coords = c.orbit_coordinates(&b).unwrap();
                assert_eq!(coords.iter().filter(|x| !x.is_zero()).count(), 1);
            }
            for l in pa.enumerate_loops(color) {
                let p = c.project(&PAElement::from_loop(color, l));
                assert_eq!(c.project(&p), p);
            }
        }
    }

    #[test]
    fn automorphism_property_up_to_color_four() {
        for name in ["S3:S2", "S3:A3", "C4:C2"] {
            let c = ctx(name);
            let cs = builtin_pair(name, 100).unwrap().into_coset_space();
            for g in cs.group().elements() {
                c.check_automorphism(g, 3).unwrap();
            }
        }
        let c = ctx("S3:S2");
        for &g in c.action().generators() {
            c.check_automorphism(g, 4).unwrap();
        }
    }

    #[test]
    fn projection_commutes_with_tangles() {
        let c = ctx("S3:S2");
        let pa = c.algebra();
        for k in 1..=3u32 {
            let color = Color::Positive(k);
            for l in pa.enumerate_loops(color) {
                let x = PAElement::from_loop(color, l);
                assert_eq!(c.project(&pa.include(&x).unwrap()), pa.include(&c.project(&x)).unwrap());
                assert_eq!(c.project(&pa.cond_exp(&x, false).unwrap()), pa.cond_exp(&c.project(&x), false).unwrap());
                assert_eq!(c.project(&pa.cond_exp_prime(&x).unwrap()), pa.cond_exp_prime(&c.project(&x)).unwrap());
            }
        }
    }

    #[test]
    fn structural_predicates() {
        for (name, n) in [("S3:S2", 3), ("S3:A3", 2), ("C4:C2", 2), ("S4:S3", 4), ("S3:S3", 1)] {
            let c = ctx(name);
            let conn = c.is_connected();
            assert!(conn.agree() && conn.by_group, "{name}");
            let m = c.modulus();
            assert!(m.agree(), "{name}");
            assert_eq!(m.by_group, Some(Scalar::sqrt_int(n)));
            let irr = c.is_irreducible();
            assert!(irr.agree() && irr.by_group, "{name}");
        }
        // Trivial group on ⋆_2: not connected by either route.
        let graph = star_graph(2);
        let spin = star_spin(&graph);
        let trivial = GraphAction::trivial(&graph);
        let c = InvariantContext::new(GraphPlanarAlgebra::new(graph, spin).unwrap(), trivial).unwrap();
        let conn = c.is_connected();
        assert!(conn.agree() && !conn.by_group);
        assert_eq!(c.dimension_by_rank(Color::ZeroPlus), 2);
        assert!(c.modulus().agree());
        assert!(c.is_irreducible().agree());
    }

    #[test]
    fn trace_is_symmetric_on_invariants() {
        let c = ctx("S3:S2");
        let pa = c.algebra();
        for k in 1..=3 {
            let b = c.invariant_basis(Color::Positive(k));
            for x in &b {
                for y in &b {
                    let xy = pa.trace(&pa.multiply(x, y).unwrap()).unwrap();
                    let yx = pa.trace(&pa.multiply(y, x).unwrap()).unwrap();
                    assert_eq!(xy, yx);
                }
            }
        }
    }
}
