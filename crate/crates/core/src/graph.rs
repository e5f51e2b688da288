//! Bipartite graphs with spin functions, the star graphs ⋆_n, the flip and
//! group actions on `(Γ, µ)`.
//!
//! Vertices carry a single id: even vertices come first, then odd ones.

use alloc::collections::VecDeque;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::group::{CosetSpace, Elem, FiniteGroup};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartiteGraph {
    even: Vec<String>,
    odd: Vec<String>,
    /// `(even index, odd index)` per edge.
    edges: Vec<(u32, u32)>,
    incident: Vec<Vec<u32>>,
}

impl BipartiteGraph {
    pub fn new(even: Vec<String>, odd: Vec<String>, edges: Vec<(u32, u32)>) -> Result<BipartiteGraph> {
        for &(u, v) in &edges {
            if u as usize >= even.len() || v as usize >= odd.len() {
                return Err(Error::InvalidGraph(alloc::format!("edge ({u}, {v}) has an endpoint out of range")));
            }
        }
        let mut incident = alloc::vec![Vec::new(); even.len() + odd.len()];
        for (e, &(u, v)) in edges.iter().enumerate() {
            incident[u as usize].push(e as u32);
            incident[even.len() + v as usize].push(e as u32);
        }
        Ok(BipartiteGraph { even, odd, edges, incident })
    }

    pub fn num_even(&self) -> usize {
        self.even.len()
    }

    pub fn num_odd(&self) -> usize {
        self.odd.len()
    }

    pub fn num_vertices(&self) -> usize {
        self.even.len() + self.odd.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn is_even(&self, v: u32) -> bool {
        (v as usize) < self.even.len()
    }

    pub fn even_id(&self, i: u32) -> u32 {
        i
    }

    pub fn odd_id(&self, j: u32) -> u32 {
        self.even.len() as u32 + j
    }

    pub fn even_vertices(&self) -> core::ops::Range<u32> {
        0..self.even.len() as u32
    }

    pub fn odd_vertices(&self) -> core::ops::Range<u32> {
        self.even.len() as u32..self.num_vertices() as u32
    }

    pub fn name(&self, v: u32) -> &str {
        let v = v as usize;
        if v < self.even.len() {
            &self.even[v]
        } else {
            &self.odd[v - self.even.len()]
        }
    }

    /// `(even id, odd id)` of an edge.
    pub fn endpoints(&self, e: u32) -> (u32, u32) {
        let (u, v) = self.edges[e as usize];
        (u, self.odd_id(v))
    }

    pub fn edge_list(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn other_end(&self, e: u32, v: u32) -> u32 {
        let (a, b) = self.endpoints(e);
        if a == v {
            b
        } else {
            debug_assert_eq!(b, v);
            a
        }
    }

    /// Edges at `v`, ascending.
    pub fn incident(&self, v: u32) -> &[u32] {
        &self.incident[v as usize]
    }

    pub fn is_connected(&self) -> bool {
        let total = self.num_vertices();
        if total == 0 {
            return true;
        }
        let mut seen = alloc::vec![false; total];
        seen[0] = true;
        let mut queue = VecDeque::from([0u32]);
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for &e in self.incident(v) {
                let w = self.other_end(e, v);
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count == total
    }

    /// Even × odd incidence counts.
    pub fn adjacency_matrix(&self) -> Vec<Vec<i64>> {
        let mut a = alloc::vec![alloc::vec![0; self.odd.len()]; self.even.len()];
        for &(u, v) in &self.edges {
            a[u as usize][v as usize] += 1;
        }
        a
    }

    /// ‖Γ‖², the largest eigenvalue of A·Aᵀ, by power iteration.
    pub fn norm_squared(&self) -> Result<f64> {
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        let a = self.adjacency_matrix();
        let mut x = alloc::vec![1.0f64; self.even.len()];
        let mut lambda = 0.0;
        for _ in 0..10_000 {
            let y: Vec<f64> = (0..self.odd.len()).map(|j| (0..x.len()).map(|i| a[i][j] as f64 * x[i]).sum()).collect();
            let z: Vec<f64> = (0..x.len()).map(|i| (0..y.len()).map(|j| a[i][j] as f64 * y[j]).sum()).collect();
            let norm = libm::sqrt(z.iter().map(|v| v * v).sum::<f64>());
            if norm == 0.0 {
                return Ok(0.0);
            }
            let next = z.iter().zip(&x).map(|(zi, xi)| zi * xi).sum::<f64>() / x.iter().map(|v| v * v).sum::<f64>();
            x = z.into_iter().map(|v| v / norm).collect();
            if (next - lambda).abs() < 1e-14 * next.abs().max(1.0) {
                return Ok(next);
            }
            lambda = next;
        }
        Ok(lambda)
    }

    /// Even and odd vertices exchanged; edges keep their indices.
    pub fn flip(&self) -> BipartiteGraph {
        let edges = self.edges.iter().map(|&(u, v)| (v, u)).collect();
        BipartiteGraph::new(self.odd.clone(), self.even.clone(), edges).expect("flip of a valid graph")
    }

    /// The id in the flipped graph of vertex `v`.
    pub fn flip_vertex(&self, v: u32) -> u32 {
        if self.is_even(v) {
            self.odd.len() as u32 + v
        } else {
            v - self.even.len() as u32
        }
    }
}

/// Strictly positive vertex weights, indexed by vertex id.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinFunction {
    values: Vec<Scalar>,
    squares: Vec<Scalar>,
}

impl SpinFunction {
    pub fn new(graph: &BipartiteGraph, values: Vec<Scalar>) -> Result<SpinFunction> {
        if values.len() != graph.num_vertices() {
            return Err(Error::InvalidGraph(alloc::format!(
                "spin function has {} values for {} vertices",
                values.len(),
                graph.num_vertices()
            )));
        }
        if let Some(v) = values.iter().position(|x| !x.is_positive()) {
            return Err(Error::InvalidGraph(alloc::format!("spin of vertex {} is not positive", graph.name(v as u32))));
        }
        let squares = values.iter().map(|x| x * x).collect();
        Ok(SpinFunction { values, squares })
    }

    pub fn value(&self, v: u32) -> &Scalar {
        &self.values[v as usize]
    }

    pub fn squared(&self, v: u32) -> &Scalar {
        &self.squares[v as usize]
    }

    pub fn values(&self) -> &[Scalar] {
        &self.values
    }

    pub fn is_exact(&self) -> bool {
        self.values.iter().all(Scalar::is_exact)
    }

    /// The same spins on the flipped graph.
    pub fn flip(&self, graph: &BipartiteGraph) -> SpinFunction {
        let mut values = alloc::vec![Scalar::zero(); self.values.len()];
        for v in 0..graph.num_vertices() as u32 {
            values[graph.flip_vertex(v) as usize] = self.values[v as usize].clone();
        }
        let squares = values.iter().map(|x| x * x).collect();
        SpinFunction { values, squares }
    }
}

/// If `A·µ² = λ·µ²` for the full bipartite adjacency matrix `A`, returns `λ`.
/// `λ` is then `‖Γ‖`, since `µ²` is a positive eigenvector.
pub fn check_pf(graph: &BipartiteGraph, spin: &SpinFunction) -> Result<Option<Scalar>> {
    if !graph.is_connected() {
        return Err(Error::Disconnected);
    }
    if graph.num_edges() == 0 {
        return Ok(Some(Scalar::zero()));
    }
    let image = |v: u32| -> Scalar {
        let mut acc = Scalar::zero();
        for &e in graph.incident(v) {
            acc += spin.squared(graph.other_end(e, v));
        }
        acc
    };
    let lambda = image(0).checked_div(spin.squared(0)).expect("positive spin");
    for v in 0..graph.num_vertices() as u32 {
        if image(v) != &lambda * spin.squared(v) {
            return Ok(None);
        }
    }
    let norm_sq = graph.norm_squared()?;
    let l = lambda.to_f64();
    if (l * l - norm_sq).abs() > 1e-9 * norm_sq.max(1.0) {
        return Ok(None);
    }
    Ok(Some(lambda))
}

/// Per-element permutations of vertices and edges.
#[derive(Clone, Debug)]
pub struct GraphAction {
    generators: Vec<Elem>,
    vertex: Vec<Vec<u32>>,
    edge: Vec<Vec<u32>>,
}

impl GraphAction {
    /// Tabulate an action and check that it respects the bipartite structure,
    /// incidences and spins.
    pub fn new(
        group: &FiniteGroup,
        graph: &BipartiteGraph,
        spin: &SpinFunction,
        vertex_map: impl Fn(Elem, u32) -> u32,
        edge_map: impl Fn(Elem, u32) -> u32,
    ) -> Result<GraphAction> {
        let vertex: Vec<Vec<u32>> =
            group.elements().map(|g| (0..graph.num_vertices() as u32).map(|v| vertex_map(g, v)).collect()).collect();
        let edge: Vec<Vec<u32>> = group.elements().map(|g| (0..graph.num_edges() as u32).map(|e| edge_map(g, e)).collect()).collect();
        let action = GraphAction { generators: group.generators().to_vec(), vertex, edge };
        action.validate(group, graph, spin)?;
        Ok(action)
    }

    pub fn trivial(graph: &BipartiteGraph) -> GraphAction {
        GraphAction {
            generators: Vec::new(),
            vertex: alloc::vec![(0..graph.num_vertices() as u32).collect()],
            edge: alloc::vec![(0..graph.num_edges() as u32).collect()],
        }
    }

    fn validate(&self, group: &FiniteGroup, graph: &BipartiteGraph, spin: &SpinFunction) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidAction(msg));
        for g in group.elements() {
            let vm = &self.vertex[g.index()];
            let em = &self.edge[g.index()];
            if !is_permutation(vm) || !is_permutation(em) {
                return fail(alloc::format!("element {} does not permute vertices and edges", g.0));
            }
            for v in 0..graph.num_vertices() as u32 {
                if graph.is_even(v) != graph.is_even(vm[v as usize]) {
                    return fail(alloc::format!("element {} swaps parity of {}", g.0, graph.name(v)));
                }
                if spin.value(v) != spin.value(vm[v as usize]) {
                    return fail(alloc::format!("spin is not constant on the orbit of {}", graph.name(v)));
                }
            }
            for e in 0..graph.num_edges() as u32 {
                let (u, w) = graph.endpoints(e);
                if graph.endpoints(em[e as usize]) != (vm[u as usize], vm[w as usize]) {
                    return fail(alloc::format!("element {} breaks the endpoints of edge {e}", g.0));
                }
            }
        }
        // Left action: (a·b)·v = a·(b·v).
        for a in group.elements() {
            for &b in group.generators() {
                let ab = group.mul(a, b).index();
                let vm = &self.vertex;
                if (0..graph.num_vertices()).any(|v| vm[ab][v] != vm[a.index()][vm[b.index()][v] as usize]) {
                    return fail(alloc::format!("vertex maps are not a left action at elements {} and {}", a.0, b.0));
                }
            }
        }
        Ok(())
    }

    pub fn generators(&self) -> &[Elem] {
        &self.generators
    }

    pub fn order(&self) -> usize {
        self.vertex.len()
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.vertex.len() as u32).map(Elem)
    }

    pub fn vertex(&self, g: Elem, v: u32) -> u32 {
        self.vertex[g.index()][v as usize]
    }

    pub fn edge(&self, g: Elem, e: u32) -> u32 {
        self.edge[g.index()][e as usize]
    }

    /// Same action on the flipped graph.
    pub fn flip(&self, graph: &BipartiteGraph) -> GraphAction {
        let n = graph.num_vertices();
        let vertex = self
            .vertex
            .iter()
            .map(|vm| {
                let mut out = alloc::vec![0; n];
                for v in 0..n as u32 {
                    out[graph.flip_vertex(v) as usize] = graph.flip_vertex(vm[v as usize]);
                }
                out
            })
            .collect();
        GraphAction { generators: self.generators.clone(), vertex, edge: self.edge.clone() }
    }
}

fn is_permutation(map: &[u32]) -> bool {
    let mut seen = alloc::vec![false; map.len()];
    map.iter().all(|&x| (x as usize) < map.len() && !core::mem::replace(&mut seen[x as usize], true))
}

/// ⋆_n with its spin function and the induced `G`-action.
#[derive(Clone, Debug)]
pub struct StarGraph {
    pub graph: BipartiteGraph,
    pub spin: SpinFunction,
    pub action: GraphAction,
}

impl StarGraph {
    /// Even vertices are the cosets `Hg_i` (ids `0..n`), the odd vertex `*`
    /// has id `n`, and edge `i` joins `Hg_i` to `*`.
    pub fn new(cs: &CosetSpace) -> Result<StarGraph> {
        let n = cs.index();
        let graph = star_graph(n);
        let spin = star_spin(&graph);
        let action =
            GraphAction::new(cs.group(), &graph, &spin, |g, v| if (v as usize) < n { cs.beta1(g, v) } else { v }, |g, e| cs.beta1(g, e))?;
        Ok(StarGraph { graph, spin, action })
    }

    pub fn index(&self) -> usize {
        self.graph.num_even()
    }

    pub fn star(&self) -> u32 {
        self.graph.odd_id(0)
    }
}

/// The bare graph ⋆_n.
pub fn star_graph(n: usize) -> BipartiteGraph {
    let even = (1..=n).map(|i| alloc::format!("Hg{i}")).collect();
    let edges = (0..n as u32).map(|i| (i, 0)).collect();
    BipartiteGraph::new(even, alloc::vec![String::from("*")], edges).expect("star graph")
}

/// `µ(*) = n^{1/4}`, `µ(Hg_i) = 1`.
pub fn star_spin(graph: &BipartiteGraph) -> SpinFunction {
    let n = graph.num_even() as u64;
    let mut values = alloc::vec![Scalar::one(); n as usize];
    values.push(Scalar::quarter_power(n, 1));
    SpinFunction::new(graph, values).expect("positive spins")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::builtin_pair;

    fn star(name: &str) -> StarGraph {
        StarGraph::new(&builtin_pair(name, 1000).unwrap().into_coset_space()).unwrap()
    }

    #[test]
    fn star_shapes() {
        let s1 = star("S3:S3");
        assert_eq!(s1.graph.num_edges(), 1);
        assert_eq!(*s1.spin.value(s1.star()), Scalar::one());
        let s3 = star("S3:S2");
        assert_eq!(s3.graph.num_edges(), 3);
        assert_eq!(*s3.spin.value(3), Scalar::quarter_power(3, 1));
        assert!(s3.spin.value(3).as_rational().is_none());
        for name in ["S3:S2", "S3:A3", "C4:C2", "S4:S3", "D4:C2", "A4:C3"] {
            star(name);
        }
    }

    #[test]
    fn star_is_pf_with_norm_sqrt_n() {
        for (name, n) in [("S3:S3", 1), ("S3:A3", 2), ("S3:S2", 3), ("S4:S3", 4), ("S5:S4", 5)] {
            let s = star(name);
            let lambda = check_pf(&s.graph, &s.spin).unwrap().unwrap();
            assert_eq!(lambda, Scalar::sqrt_int(n));
            assert!(lambda.is_exact());
        }
    }

    #[test]
    fn path_a3_is_pf_numerically() {
        let g = BipartiteGraph::new(alloc::vec!["a".into(), "c".into()], alloc::vec!["b".into()], alloc::vec![(0, 0), (1, 0)]).unwrap();
        let r = libm::sqrt(libm::sqrt(2.0));
        let spin = SpinFunction::new(&g, alloc::vec![Scalar::one(), Scalar::one(), Scalar::from_f64(r)]).unwrap();
        let lambda = check_pf(&g, &spin).unwrap().unwrap();
        assert!((lambda.to_f64() - core::f64::consts::SQRT_2).abs() < 1e-12);
        let bad = SpinFunction::new(&g, alloc::vec![Scalar::one(), Scalar::from_int(2), Scalar::one()]).unwrap();
        assert!(check_pf(&g, &bad).unwrap().is_none());
    }

    #[test]
    fn flip_is_an_involution() {
        let s = star("S3:S2");
        let f = s.graph.flip();
        assert_eq!((f.num_even(), f.num_odd()), (1, 3));
        assert_eq!(f.flip(), s.graph);
        assert_eq!(f.num_edges(), s.graph.num_edges());
        let a = s.graph.adjacency_matrix();
        let b = f.adjacency_matrix();
        for i in 0..a.len() {
            for j in 0..a[0].len() {
                assert_eq!(a[i][j], b[j][i]);
            }
        }
        let spin = s.spin.flip(&s.graph);
        assert_eq!(*spin.value(0), Scalar::quarter_power(3, 1));
        assert_eq!(spin.flip(&f), s.spin);
    }

    #[test]
    fn disconnected_graph_is_rejected() {
        let g = BipartiteGraph::new(alloc::vec!["a".into(), "b".into()], alloc::vec!["x".into()], alloc::vec![(0, 0)]).unwrap();
        assert!(!g.is_connected());
        let spin = SpinFunction::new(&g, alloc::vec![Scalar::one(); 3]).unwrap();
        assert_eq!(check_pf(&g, &spin).unwrap_err(), Error::Disconnected);
    }

    #[test]
    fn invalid_actions_are_rejected() {
        let cs = builtin_pair("S3:S2", 100).unwrap().into_coset_space();
        let graph = star_graph(3);
        let spin = star_spin(&graph);
        // Moving vertices but not edges breaks incidence.
        let r = GraphAction::new(cs.group(), &graph, &spin, |g, v| if v < 3 { cs.beta1(g, v) } else { v }, |_, e| e);
        assert!(matches!(r, Err(Error::InvalidAction(_))));
    }
}
