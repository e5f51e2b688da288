use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::{Color, Loop, PAElement};
use crate::error::{Error, Result};
use crate::graph::{check_pf, star_graph, star_spin, BipartiteGraph, SpinFunction};
use crate::scalar::Scalar;

/// Base vertex and first half of the edge path of a loop.
type HalfKey<'a> = (u32, &'a [u32]);

/// The graph planar algebra of a connected bipartite graph with spins.
#[derive(Clone, Debug)]
pub struct GraphPlanarAlgebra {
    graph: BipartiteGraph,
    spin: SpinFunction,
    modulus: Option<Scalar>,
}

impl GraphPlanarAlgebra {
    pub fn new(graph: BipartiteGraph, spin: SpinFunction) -> Result<GraphPlanarAlgebra> {
        let modulus = check_pf(&graph, &spin)?;
        Ok(GraphPlanarAlgebra { graph, spin, modulus })
    }

    /// P(⋆_n) with `µ(*) = n^{1/4}`.
    pub fn star(n: usize) -> GraphPlanarAlgebra {
        let graph = star_graph(n);
        let spin = star_spin(&graph);
        GraphPlanarAlgebra::new(graph, spin).expect("star graphs are connected")
    }

    pub fn graph(&self) -> &BipartiteGraph {
        &self.graph
    }

    pub fn spin(&self) -> &SpinFunction {
        &self.spin
    }

    /// `‖Γ‖` when the spins squared form the Perron-Frobenius eigenvector.
    pub fn modulus(&self) -> Option<&Scalar> {
        self.modulus.as_ref()
    }

    pub fn delta(&self) -> Result<Scalar> {
        self.modulus.clone().ok_or(Error::NoModulus)
    }

    /// The flipped graph with the same spins.
    pub fn flip(&self) -> GraphPlanarAlgebra {
        let graph = self.graph.flip();
        let spin = self.spin.flip(&self.graph);
        GraphPlanarAlgebra { graph, spin, modulus: self.modulus.clone() }
    }

    fn mu_sq(&self, v: u32) -> &Scalar {
        self.spin.squared(v)
    }

    fn mu_ratio_sq(&self, num: u32, den: u32) -> Scalar {
        self.mu_sq(num).checked_div(self.mu_sq(den)).expect("positive spins")
    }

    /// Edge sequences of all paths with `len` edges starting at `start`,
    /// in lexicographic order, with their vertex sequences.
    fn paths(&self, start: u32, len: usize) -> Vec<(Vec<u32>, Vec<u32>)> {
        let mut out = Vec::new();
        let mut verts = alloc::vec![start];
        let mut edges = Vec::new();
        self.extend_paths(len, &mut verts, &mut edges, &mut out);
        out
    }

    fn extend_paths(&self, len: usize, verts: &mut Vec<u32>, edges: &mut Vec<u32>, out: &mut Vec<(Vec<u32>, Vec<u32>)>) {
        if edges.len() == len {
            out.push((verts.clone(), edges.clone()));
            return;
        }
        let v = *verts.last().expect("non-empty path");
        for &e in self.graph.incident(v) {
            edges.push(e);
            verts.push(self.graph.other_end(e, v));
            self.extend_paths(len, verts, edges, out);
            verts.pop();
            edges.pop();
        }
    }

    /// All loops of a color, in basis order.
    pub fn enumerate_loops(&self, color: Color) -> Vec<Loop> {
        match color {
            Color::ZeroPlus => self.graph.even_vertices().map(Loop::vertex_loop).collect(),
            Color::ZeroMinus => self.graph.odd_vertices().map(Loop::vertex_loop).collect(),
            Color::Positive(k) => {
                let mut out = Vec::new();
                for base in self.graph.even_vertices() {
                    for (mut verts, edges) in self.paths(base, 2 * k as usize) {
                        if verts.pop() == Some(base) {
                            out.push(Loop::new(verts, edges));
                        }
                    }
                }
                out
            }
        }
    }

    /// The loop going out along a path and straight back.
    fn out_and_back(verts: &[u32], edges: &[u32]) -> Loop {
        let k = edges.len();
        let mut vs = verts.to_vec();
        vs.extend(verts[1..k].iter().rev());
        let mut es = edges.to_vec();
        es.extend(edges.iter().rev());
        Loop::new(vs, es)
    }

    pub fn unit(&self, color: Color) -> PAElement {
        match color {
            Color::ZeroPlus | Color::ZeroMinus => {
                PAElement::from_terms(color, self.enumerate_loops(color).into_iter().map(|l| (l, Scalar::one())))
            }
            Color::Positive(k) => {
                let mut x = PAElement::zero(color);
                for base in self.graph.even_vertices() {
                    for (verts, edges) in self.paths(base, k as usize) {
                        x.add_term(Self::out_and_back(&verts, &edges), &Scalar::one());
                    }
                }
                x
            }
        }
    }

    /// `Z_{I}`: one color up, appending an out-and-back step at `π_k`.
    pub fn include(&self, x: &PAElement) -> Result<PAElement> {
        let target = x.color().raised();
        let mut out = PAElement::zero(target);
        for (l, c) in x.terms() {
            match x.color() {
                Color::ZeroPlus => {
                    let u = l.base();
                    for &e in self.graph.incident(u) {
                        out.add_term(Loop::new(alloc::vec![u, self.graph.other_end(e, u)], alloc::vec![e, e]), c);
                    }
                }
                Color::ZeroMinus => {
                    let v = l.base();
                    for &e in self.graph.incident(v) {
                        out.add_term(Loop::new(alloc::vec![self.graph.other_end(e, v), v], alloc::vec![e, e]), c);
                    }
                }
                Color::Positive(k) => {
                    let k = k as usize;
                    let pk = l.vertex(k);
                    for &e in self.graph.incident(pk) {
                        let mut verts = l.vertices()[..=k].to_vec();
                        verts.push(self.graph.other_end(e, pk));
                        verts.extend_from_slice(&l.vertices()[k..]);
                        let mut edges = l.edges()[..k].to_vec();
                        edges.extend([e, e]);
                        edges.extend_from_slice(&l.edges()[k..]);
                        out.add_term(Loop::new(verts, edges), c);
                    }
                }
            }
        }
        Ok(out)
    }

    /// `Z_{M}`: matrix-unit multiplication of loops.
    pub fn multiply(&self, x: &PAElement, y: &PAElement) -> Result<PAElement> {
        x.expect_color(y.color())?;
        let color = x.color();
        let mut out = PAElement::zero(color);
        if color.is_zero() {
            for (l, c) in x.terms() {
                let d = y.coeff(l);
                out.add_term(l.clone(), &(c * &d));
            }
            return Ok(out);
        }
        let k = color.half_len();
        // Index y by its first half: base vertex and first k edges.
        let mut by_first_half: BTreeMap<HalfKey, Vec<(&Loop, &Scalar)>> = BTreeMap::new();
        for (l, c) in y.terms() {
            by_first_half.entry((l.base(), &l.edges()[..k])).or_default().push((l, c));
        }
        for (a, ca) in x.terms() {
            let key_edges: Vec<u32> = a.edges()[k..].iter().rev().copied().collect();
            let Some(matches) = by_first_half.get(&(a.base(), &key_edges[..])) else { continue };
            for &(b, cb) in matches {
                let mut verts = a.vertices()[..k].to_vec();
                verts.extend_from_slice(&b.vertices()[k..]);
                let mut edges = a.edges()[..k].to_vec();
                edges.extend_from_slice(&b.edges()[k..]);
                out.add_term(Loop::new(verts, edges), &(ca * cb));
            }
        }
        Ok(out)
    }

    /// The `*`-structure: reversal of loops (spins and coefficients are real).
    pub fn adjoint(&self, x: &PAElement) -> PAElement {
        PAElement::from_terms(x.color(), x.terms().map(|(l, c)| (l.reversed(), c.clone())))
    }

    /// `Z_{E}`: one color down by capping the two middle strands. From color
    /// 1, `minus` selects the `0-` target.
    pub fn cond_exp(&self, x: &PAElement, minus: bool) -> Result<PAElement> {
        let target = x.color().lowered(minus).ok_or(Error::BadColor(x.color()))?;
        let mut out = PAElement::zero(target);
        for (l, c) in x.terms() {
            match target {
                Color::ZeroPlus | Color::ZeroMinus => {
                    if l.edge(0) != l.edge(1) {
                        continue;
                    }
                    let (keep, drop) = if minus { (l.vertex(1), l.vertex(0)) } else { (l.vertex(0), l.vertex(1)) };
                    out.add_term(Loop::vertex_loop(keep), &(c * &self.mu_ratio_sq(drop, keep)));
                }
                Color::Positive(k) => {
                    let k = k as usize;
                    if l.edge(k) != l.edge(k + 1) {
                        continue;
                    }
                    let mut verts = l.vertices()[..=k].to_vec();
                    verts.extend_from_slice(&l.vertices()[k + 3..]);
                    let mut edges = l.edges()[..k].to_vec();
                    edges.extend_from_slice(&l.edges()[k + 2..]);
                    let coeff = self.mu_ratio_sq(l.vertex(k + 1), l.vertex(k));
                    out.add_term(Loop::new(verts, edges), &(c * &coeff));
                }
            }
        }
        Ok(out)
    }

    /// `Z_{E'}`: caps the first strand, re-basing the loop at every even
    /// neighbour of `π_1`.
    pub fn cond_exp_prime(&self, x: &PAElement) -> Result<PAElement> {
        let k = x.color().half_len();
        if k == 0 {
            return Err(Error::BadColor(x.color()));
        }
        let mut out = PAElement::zero(x.color());
        for (l, c) in x.terms() {
            if l.edge(2 * k - 1) != l.edge(0) {
                continue;
            }
            let p1 = l.vertex(1);
            let coeff = c * &self.mu_ratio_sq(l.vertex(0), p1);
            for &e in self.graph.incident(p1) {
                let u = self.graph.other_end(e, p1);
                let mut verts = l.vertices().to_vec();
                verts[0] = u;
                let mut edges = l.edges().to_vec();
                edges[0] = e;
                edges[2 * k - 1] = e;
                out.add_term(Loop::new(verts, edges), &coeff);
            }
        }
        Ok(out)
    }

    /// `Z_{𝓔^{k+1}}(1)` at color `k+1 ≥ 2`: loops of shape
    /// `p · (e, e) · (f, f) · reverse(p)` where `p` has `k-1` edges.
    pub fn jones_element(&self, color: Color) -> Result<PAElement> {
        let k = color.half_len();
        if k < 2 {
            return Err(Error::BadColor(color));
        }
        let k = k - 1;
        let mut out = PAElement::zero(color);
        for base in self.graph.even_vertices() {
            for (pv, pe) in self.paths(base, k - 1) {
                let pk1 = *pv.last().expect("path");
                for &e in self.graph.incident(pk1) {
                    let pk = self.graph.other_end(e, pk1);
                    for &f in self.graph.incident(pk1) {
                        let pk2 = self.graph.other_end(f, pk1);
                        let mut verts = pv.clone();
                        verts.extend([pk, pk1, pk2]);
                        verts.extend(pv[1..].iter().rev());
                        let mut edges = pe.clone();
                        edges.extend([e, e, f, f]);
                        edges.extend(pe.iter().rev());
                        let coeff = (self.spin.value(pk) * self.spin.value(pk2)).checked_div(self.mu_sq(pk1)).expect("positive spins");
                        out.add_term(Loop::new(verts, edges), &coeff);
                    }
                }
            }
        }
        Ok(out)
    }

    /// `δ^{-k} Z_{E^{0+}_k}(x)`: the trace as a multiple of `1_{0+}` (or `x`
    /// itself at colors `0±`).
    pub fn trace_vector(&self, x: &PAElement) -> Result<PAElement> {
        let k = x.color().half_len();
        let mut y = x.clone();
        while !y.color().is_zero() {
            y = self.cond_exp(&y, false)?;
        }
        Ok(y.scaled(&self.delta()?.pow(-(k as i32))))
    }

    /// Scalar trace; errors when the `0+` vector is not a multiple of the unit.
    pub fn trace(&self, x: &PAElement) -> Result<Scalar> {
        let v = self.trace_vector(x)?;
        if v.is_zero() {
            return Ok(Scalar::zero());
        }
        v.ratio_to(&self.unit(v.color())).ok_or_else(|| Error::TraceNotScalar(v.describe(&self.graph)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rank;
    use crate::scalar::Rational;

    fn basis(pa: &GraphPlanarAlgebra, color: Color) -> Vec<PAElement> {
        pa.enumerate_loops(color).into_iter().map(|l| PAElement::from_loop(color, l)).collect()
    }

    fn star_loop(pa: &GraphPlanarAlgebra, tuple: &[u32]) -> Loop {
        let star = pa.graph().odd_id(0);
        let k = tuple.len();
        let mut verts = Vec::new();
        let mut edges = Vec::new();
        for (p, &a) in tuple.iter().enumerate() {
            verts.extend([a, star]);
            edges.extend([a, tuple[(p + 1) % k]]);
        }
        Loop::new(verts, edges)
    }

    fn colors(max: u32) -> Vec<Color> {
        let mut c = alloc::vec![Color::ZeroPlus, Color::ZeroMinus];
        c.extend((1..=max).map(Color::Positive));
        c
    }

    #[test]
    fn loop_counts() {
        for n in 1..=4usize {
            let pa = GraphPlanarAlgebra::star(n);
            for k in 1..=5u32 {
                let loops = pa.enumerate_loops(Color::Positive(k));
                assert_eq!(loops.len(), n.pow(k));
                assert!(loops.windows(2).all(|w| w[0] < w[1]));
                assert!(loops.iter().all(|l| l.is_valid(pa.graph())));
            }
            assert_eq!(pa.enumerate_loops(Color::ZeroPlus).len(), n);
            assert_eq!(pa.enumerate_loops(Color::ZeroMinus).len(), 1);
        }
    }

    #[test]
    fn unit_of_color_one_is_sum_of_two_loops() {
        let pa = GraphPlanarAlgebra::star(3);
        let u = pa.unit(Color::Positive(1));
        let expected = PAElement::from_terms(Color::Positive(1), (0..3).map(|i| (star_loop(&pa, &[i]), Scalar::one())));
        assert_eq!(u, expected);
        let one = GraphPlanarAlgebra::star(1);
        for c in colors(4) {
            assert_eq!(one.unit(c).len(), 1);
        }
    }

    #[test]
    fn star_algebras_are_unital_associative_star_algebras() {
        for n in 1..=3 {
            let pa = GraphPlanarAlgebra::star(n);
            for c in colors(3) {
                let b = basis(&pa, c);
                let one = pa.unit(c);
                for x in &b {
                    assert_eq!(pa.multiply(&one, x).unwrap(), *x);
                    assert_eq!(pa.multiply(x, &one).unwrap(), *x);
                    assert_eq!(pa.adjoint(&pa.adjoint(x)), *x);
                    for y in &b {
                        let xy = pa.multiply(x, y).unwrap();
                        assert_eq!(pa.adjoint(&xy), pa.multiply(&pa.adjoint(y), &pa.adjoint(x)).unwrap());
                        if n <= 2 || c.half_len() <= 2 {
                            for z in &b {
                                assert_eq!(pa.multiply(&xy, z).unwrap(), pa.multiply(x, &pa.multiply(y, z).unwrap()).unwrap());
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn color_one_products_are_diagonal() {
        let pa = GraphPlanarAlgebra::star(3);
        for i in 0..3 {
            for j in 0..3 {
                let x = PAElement::from_loop(Color::Positive(1), star_loop(&pa, &[i]));
                let y = PAElement::from_loop(Color::Positive(1), star_loop(&pa, &[j]));
                let p = pa.multiply(&x, &y).unwrap();
                assert_eq!(p, if i == j { x.clone() } else { PAElement::zero(Color::Positive(1)) });
                assert_eq!(pa.adjoint(&x), x);
            }
        }
        let a = pa.unit(Color::Positive(2));
        assert!(matches!(pa.multiply(&a, &pa.unit(Color::Positive(3))), Err(Error::ColorMismatch { .. })));
    }

    #[test]
    fn inclusion_is_unital_and_injective() {
        let pa = GraphPlanarAlgebra::star(3);
        for c in colors(3) {
            assert_eq!(pa.include(&pa.unit(c)).unwrap(), pa.unit(c.raised()));
        }
        let x = PAElement::from_loop(Color::Positive(1), star_loop(&pa, &[1]));
        let expected = PAElement::from_terms(Color::Positive(2), (0..3).map(|x| (star_loop(&pa, &[1, x]), Scalar::one())));
        assert_eq!(pa.include(&x).unwrap(), expected);
        for k in 1..=3 {
            let b = basis(&pa, Color::Positive(k));
            let images: Vec<_> = b.iter().map(|x| pa.include(x).unwrap().rational_terms().unwrap()).collect();
            assert_eq!(rank(&images), b.len());
        }
    }

    /// Independent oracle: the pictorial trace in closed form.
    fn closed_form_trace(pa: &GraphPlanarAlgebra, x: &PAElement) -> PAElement {
        let k = x.color().half_len();
        let delta = pa.delta().unwrap();
        let mut out = PAElement::zero(Color::ZeroPlus);
        for (l, c) in x.terms() {
            if (0..2 * k).all(|i| l.edge(i) == l.edge(2 * k - 1 - i)) {
                let coeff = pa.mu_ratio_sq(l.vertex(k), l.vertex(0));
                out.add_term(Loop::vertex_loop(l.base()), &(c * &coeff));
            }
        }
        out.scaled(&delta.pow(-(k as i32)))
    }

    #[test]
    fn conditional_expectation_regression_table() {
        let pa = GraphPlanarAlgebra::star(3);
        let r = Scalar::quarter_power(3, -2);
        for x in 0..3 {
            for y in 0..3 {
                let l = PAElement::from_loop(Color::Positive(2), star_loop(&pa, &[x, y]));
                let expected = PAElement::from_terms(Color::Positive(1), [(star_loop(&pa, &[x]), r.clone())]);
                assert_eq!(pa.cond_exp(&l, false).unwrap(), expected);
            }
        }
        let l = PAElement::from_loop(Color::Positive(1), star_loop(&pa, &[2]));
        let plus = pa.cond_exp(&l, false).unwrap();
        assert_eq!(plus, PAElement::from_terms(Color::ZeroPlus, [(Loop::vertex_loop(2), Scalar::sqrt_int(3))]));
        let minus = pa.cond_exp(&l, true).unwrap();
        assert_eq!(minus, PAElement::from_terms(Color::ZeroMinus, [(Loop::vertex_loop(3), r)]));
        assert!(pa.cond_exp(&pa.unit(Color::ZeroPlus), false).is_err());
        assert!(pa.cond_exp(&pa.unit(Color::Positive(2)), true).is_err());
    }

    #[test]
    fn conditional_expectation_preserves_trace() {
        for n in 1..=3 {
            let pa = GraphPlanarAlgebra::star(n);
            let delta = pa.delta().unwrap();
            let inv_delta = delta.inv().unwrap();
            for k in 1..=4u32 {
                for x in basis(&pa, Color::Positive(k)) {
                    let tv = pa.trace_vector(&x).unwrap();
                    assert_eq!(tv, closed_form_trace(&pa, &x));
                    if k > 1 {
                        let ex = pa.cond_exp(&x, false).unwrap().scaled(&inv_delta);
                        assert_eq!(pa.trace_vector(&ex).unwrap(), tv);
                    }
                }
                for x in basis(&pa, Color::Positive(k)) {
                    assert_eq!(pa.cond_exp(&pa.include(&x).unwrap(), false).unwrap(), x.scaled(&delta));
                }
            }
            assert_eq!(pa.trace(&pa.unit(Color::Positive(3))).unwrap(), Scalar::one());
        }
    }

    #[test]
    fn trace_on_non_invariant_elements_reports_the_vector() {
        let pa = GraphPlanarAlgebra::star(2);
        let x = PAElement::from_loop(Color::Positive(1), star_loop(&pa, &[0]));
        assert!(matches!(pa.trace(&x), Err(Error::TraceNotScalar(_))));
    }

    #[test]
    fn bimodule_law() {
        for n in 2..=3 {
            let pa = GraphPlanarAlgebra::star(n);
            let inv_delta = pa.delta().unwrap().inv().unwrap();
            let e = |x: &PAElement| pa.cond_exp(x, false).unwrap().scaled(&inv_delta);
            for k in 1..=2u32 {
                let small = basis(&pa, Color::Positive(k));
                let big = basis(&pa, Color::Positive(k + 1));
                for a in &small {
                    for b in &small {
                        let ia = pa.include(a).unwrap();
                        let ib = pa.include(b).unwrap();
                        for x in &big {
                            let lhs = e(&pa.multiply(&pa.multiply(&ia, x).unwrap(), &ib).unwrap());
                            let rhs = pa.multiply(&pa.multiply(a, &e(x)).unwrap(), b).unwrap();
                            assert_eq!(lhs, rhs);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn prime_expectation_example_and_idempotence() {
        let pa = GraphPlanarAlgebra::star(3);
        let x = PAElement::from_loop(Color::Positive(1), star_loop(&pa, &[1]));
        let expected = pa.unit(Color::Positive(1)).scaled(&Scalar::quarter_power(3, -2));
        assert_eq!(pa.cond_exp_prime(&x).unwrap(), expected);
        let inv_delta = pa.delta().unwrap().inv().unwrap();
        for k in 1..=3u32 {
            for x in basis(&pa, Color::Positive(k)) {
                let once = pa.cond_exp_prime(&x).unwrap().scaled(&inv_delta);
                let twice = pa.cond_exp_prime(&once).unwrap().scaled(&inv_delta);
                assert_eq!(once, twice);
            }
        }
        assert!(pa.cond_exp_prime(&pa.unit(Color::ZeroPlus)).is_err());
    }

    #[test]
    fn jones_element_of_color_two() {
        let pa = GraphPlanarAlgebra::star(3);
        let j = pa.jones_element(Color::Positive(2)).unwrap();
        let expected = PAElement::from_terms(Color::Positive(2), (0..3).map(|x| (star_loop(&pa, &[x, x]), Scalar::sqrt_int(3))));
        assert_eq!(j, expected);
        assert!(pa.jones_element(Color::Positive(1)).is_err());
    }

    #[test]
    fn temperley_lieb_relations() {
        for n in 2..=4 {
            let pa = GraphPlanarAlgebra::star(n);
            let inv_delta = pa.delta().unwrap().inv().unwrap();
            let tau = Scalar::ratio(1, n as i64);
            let e = |m: u32| pa.jones_element(Color::Positive(m + 1)).unwrap().scaled(&inv_delta);
            let lift = |x: &PAElement| pa.include(x).unwrap();
            for m in 1..=4u32 {
                let em = e(m);
                assert_eq!(pa.multiply(&em, &em).unwrap(), em);
                assert_eq!(pa.adjoint(&em), em);
                assert_eq!(pa.trace(&em).unwrap(), tau);
                if m < 4 {
                    let a = lift(&em);
                    let b = e(m + 1);
                    assert_eq!(pa.multiply(&pa.multiply(&a, &b).unwrap(), &a).unwrap(), a.scaled(&tau));
                    assert_eq!(pa.multiply(&pa.multiply(&b, &a).unwrap(), &b).unwrap(), b.scaled(&tau));
                }
            }
        }
    }

    #[test]
    fn trace_values_are_rational_for_units() {
        let pa = GraphPlanarAlgebra::star(4);
        for c in colors(4) {
            assert_eq!(pa.trace(&pa.unit(c)).unwrap().as_rational(), Some(Rational::from_integer(1)));
        }
    }
}
