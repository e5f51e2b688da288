//! The isomorphism φ from the operator-matrix model onto P(⋆_n)^G, and the
//! finite checks that it is a planar algebra isomorphism.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::graph::GraphAction;
use crate::group::{builtin_group, burnside_count, conjugacy_classes, CosetSpace, Elem, TupleCodec};
use crate::invariant::InvariantContext;
use crate::linalg::{solve, Echelon};
use crate::model::{level_of, Commutant, GroupAlgebraMatrix, Level, ModelElement, SubfactorModel};
use crate::planar::{Color, GraphPlanarAlgebra, Loop, PAElement};
use crate::scalar::{Rational, Scalar};
use crate::tangle::{evaluate, TangleExpr, TangleModel};

/// φ together with both models it connects.
#[derive(Clone, Debug)]
pub struct PhiMap {
    model: SubfactorModel,
    loops: InvariantContext,
    left_reps: Vec<Elem>,
}

impl PhiMap {
    pub fn new(cosets: CosetSpace) -> Result<PhiMap> {
        let loops = InvariantContext::star(&cosets)?;
        let g = cosets.group();
        let left_reps = cosets.reps().iter().map(|&r| g.inv(r)).collect();
        Ok(PhiMap { model: SubfactorModel::new(cosets), loops, left_reps })
    }

    pub fn model(&self) -> &SubfactorModel {
        &self.model
    }

    pub fn loops(&self) -> &InvariantContext {
        &self.loops
    }

    pub fn algebra(&self) -> &GraphPlanarAlgebra {
        self.loops.algebra()
    }

    pub fn cosets(&self) -> &CosetSpace {
        self.model.cosets()
    }

    /// The loop on ⋆_n visiting the even vertices `a_0, a_1, …` in order,
    /// passing through `*` in between.
    pub fn star_loop(&self, tuple: &[u32]) -> Loop {
        let star = self.algebra().graph().odd_id(0);
        let k = tuple.len();
        let mut verts = Vec::with_capacity(2 * k);
        let mut edges = Vec::with_capacity(2 * k);
        for (p, &a) in tuple.iter().enumerate() {
            verts.extend([a, star]);
            edges.extend([a, tuple[(p + 1) % k]]);
        }
        Loop::new(verts, edges)
    }

    /// The loop of the matrix unit `(i, j)` at a positive color: based at
    /// `H`, running through the suffix cosets of `i` and back through those
    /// of `j`.
    pub fn pair_loop(&self, color: Color, i: &[u32], j: &[u32]) -> Loop {
        let m = color.half_len();
        let mut tuple = alloc::vec![0u32; m];
        for (p, c) in self.cosets().suffix_cosets(i).into_iter().enumerate() {
            tuple[p + 1] = c;
        }
        for (p, c) in self.cosets().suffix_cosets(j).into_iter().enumerate() {
            tuple[m - 1 - p] = c;
        }
        self.star_loop(&tuple)
    }

    /// φ on an element of `N′ ∩ M_{c-1}`.
    pub fn phi(&self, x: &ModelElement) -> Result<PAElement> {
        let color = x.color();
        let pa = self.algebra();
        if color.is_zero() {
            let value = x.as_scalar().expect("scalar color");
            return Ok(pa.unit(color).scaled(&value));
        }
        let coeffs = self.model.coefficients(x.matrix(), Commutant::OfN)?;
        let codec = self.model.codec(level_of(color).tuple_len);
        let mut out = PAElement::zero(color);
        for (&(a, b), c) in &coeffs {
            let l = self.pair_loop(color, &codec.decode(a as usize), &codec.decode(b as usize));
            let w = x.factor() * &Scalar::from_rational(*c);
            for &t in &self.left_reps {
                out.add_term(self.loops.act_loop(t, &l), &w);
            }
        }
        Ok(out)
    }

    /// The matrix of φ at a color: column `b` holds the coordinates of the
    /// image of relative-commutant basis element `b` in the loop orbit basis.
    pub fn matrix(&self, color: Color) -> Result<Vec<Vec<Rational>>> {
        let basis = self.model_basis(color);
        let dim = self.loops.dimension(color);
        let mut m = alloc::vec![alloc::vec![Rational::zero(); basis.len()]; dim];
        for (b, x) in basis.iter().enumerate() {
            let coords = self.loops.orbit_coordinates(&self.phi(x)?)?;
            if coords.len() != dim {
                return Err(Error::Inconsistent("orbit basis size changed".into()));
            }
            for (r, c) in coords.into_iter().enumerate() {
                m[r][b] =
                    c.as_rational().ok_or_else(|| Error::Inconsistent(alloc::format!("φ has an irrational entry at color {color}")))?;
            }
        }
        Ok(m)
    }

    /// φ is square and of full rank at this color.
    pub fn is_bijective(&self, color: Color) -> Result<bool> {
        let m = self.matrix(color)?;
        let cols = m.first().map_or(0, Vec::len);
        if m.len() != cols {
            return Ok(false);
        }
        let mut e = Echelon::new();
        for row in &m {
            e.insert(&row.iter().copied().enumerate().collect::<BTreeMap<_, _>>());
        }
        Ok(e.rank() == cols)
    }

    /// The relative-commutant basis at a color; `0±` have the unit alone.
    pub fn model_basis(&self, color: Color) -> Vec<ModelElement> {
        if color.is_zero() {
            alloc::vec![self.model.unit(color)]
        } else {
            self.model.relative_commutant_basis(color, Commutant::OfN)
        }
    }

    /// φ⁻¹ on a `G`-invariant element whose orbit coordinates are a common
    /// scalar times rationals.
    pub fn phi_inverse(&self, y: &PAElement) -> Result<ModelElement> {
        let color = y.color();
        let coords = self.loops.orbit_coordinates(y)?;
        let Some(lead) = coords.iter().find(|c| !c.is_zero()).cloned() else {
            return Ok(self.model.unit(color).scaled(&Scalar::zero()));
        };
        let rhs: Vec<Rational> = coords
            .iter()
            .map(|c| c.checked_div(&lead).and_then(|r| r.as_rational()))
            .collect::<Option<_>>()
            .ok_or_else(|| Error::Inconsistent("coordinates are not a scalar multiple of a rational vector".into()))?;
        let m = self.matrix(color)?;
        let x = solve(&m, &rhs).ok_or_else(|| Error::Inconsistent(alloc::format!("φ is singular at color {color}")))?;
        let basis = self.model_basis(color);
        let mut matrix = GroupAlgebraMatrix::zero(level_of(color), self.model.index());
        for (b, c) in basis.iter().zip(x) {
            let scale = b.factor().as_rational().expect("basis factors are rational") * c;
            matrix.add_scaled(b.matrix(), scale)?;
        }
        ModelElement::new(color, lead, matrix)
    }

    /// Every check of the morphism square up to `depth`, in a fixed order.
    pub fn verification_plan(depth: u32) -> Vec<(GeneratorTangle, Color)> {
        let mut colors = alloc::vec![Color::ZeroPlus, Color::ZeroMinus];
        colors.extend((1..=depth).map(Color::Positive));
        let mut plan = Vec::new();
        for &c in &colors {
            plan.push((GeneratorTangle::Bijection, c));
            plan.push((GeneratorTangle::Unit, c));
            if c.raised().half_len() <= depth as usize {
                plan.push((GeneratorTangle::Inclusion, c));
            }
            plan.push((GeneratorTangle::Multiplication, c));
            if !c.is_zero() {
                plan.push((GeneratorTangle::CondExp, c));
                plan.push((GeneratorTangle::CondExpPrime, c));
            }
            if c == Color::Positive(1) {
                plan.push((GeneratorTangle::CondExpMinus, c));
            }
            if c.half_len() >= 2 {
                plan.push((GeneratorTangle::Jones, c));
            }
            plan.push((GeneratorTangle::Adjoint, c));
            plan.push((GeneratorTangle::Trace, c));
        }
        plan
    }

    /// Compares `φ ∘ Z^model` with `Z^loop ∘ φ` for one generator on the full
    /// basis at one input color.
    pub fn run_check(&self, tangle: GeneratorTangle, color: Color) -> CheckOutcome {
        let basis = self.model_basis(color);
        let mut outcome = CheckOutcome { tangle, color, basis_size: basis.len(), cases: 0, counterexample: None };
        let pa = self.algebra();
        let m = &self.model;
        let graph = pa.graph();
        let fail = |outcome: &mut CheckOutcome, case: String, detail: String| {
            if outcome.counterexample.is_none() {
                outcome.counterexample = Some(alloc::format!("{case}: {detail}"));
            }
        };
        let compare = |outcome: &mut CheckOutcome, case: String, lhs: Result<PAElement>, rhs: Result<PAElement>| {
            outcome.cases += 1;
            match (lhs, rhs) {
                (Ok(a), Ok(b)) if a == b => {}
                (Ok(a), Ok(b)) => {
                    fail(outcome, case, alloc::format!("model side {} but loop side {}", a.describe(graph), b.describe(graph)))
                }
                (Err(e), _) | (_, Err(e)) => fail(outcome, case, e.to_string()),
            }
        };
        let phi_basis: Vec<Result<PAElement>> = basis.iter().map(|x| self.phi(x)).collect();
        match tangle {
            GeneratorTangle::Bijection => {
                outcome.cases = 1;
                match self.is_bijective(color) {
                    Ok(true) => {}
                    Ok(false) => fail(&mut outcome, "φ".into(), "matrix is not square of full rank".into()),
                    Err(e) => fail(&mut outcome, "φ".into(), e.to_string()),
                }
            }
            GeneratorTangle::Unit => compare(&mut outcome, "unit".into(), self.phi(&m.unit(color)), Ok(pa.unit(color))),
            GeneratorTangle::Jones => {
                let lhs = m.jones_element(color).and_then(|x| self.phi(&x));
                compare(&mut outcome, "jones".into(), lhs, pa.jones_element(color));
            }
            GeneratorTangle::Multiplication => {
                for (a, x) in basis.iter().enumerate() {
                    for (b, y) in basis.iter().enumerate() {
                        let lhs = m.multiply(x, y).and_then(|z| self.phi(&z));
                        let rhs = match (&phi_basis[a], &phi_basis[b]) {
                            (Ok(px), Ok(py)) => pa.multiply(px, py),
                            (Err(e), _) | (_, Err(e)) => Err(e.clone()),
                        };
                        compare(&mut outcome, alloc::format!("basis ({a}, {b})"), lhs, rhs);
                    }
                }
            }
            GeneratorTangle::Trace => {
                for (a, x) in basis.iter().enumerate() {
                    outcome.cases += 1;
                    let lhs = m.trace_element(x);
                    match phi_basis[a].as_ref().map_err(Clone::clone).and_then(|px| pa.trace(px)) {
                        Ok(rhs) if rhs == lhs => {}
                        Ok(rhs) => {
                            fail(&mut outcome, alloc::format!("basis {a}"), alloc::format!("model trace {lhs} but loop trace {rhs}"))
                        }
                        Err(e) => fail(&mut outcome, alloc::format!("basis {a}"), e.to_string()),
                    }
                }
            }
            _ => {
                for (a, x) in basis.iter().enumerate() {
                    let (lhs, rhs) = match (tangle, &phi_basis[a]) {
                        (_, Err(e)) => (Err(e.clone()), Err(e.clone())),
                        (GeneratorTangle::Inclusion, Ok(px)) => (m.include(x).and_then(|z| self.phi(&z)), pa.include(px)),
                        (GeneratorTangle::CondExp, Ok(px)) => (m.cond_exp(x, false).and_then(|z| self.phi(&z)), pa.cond_exp(px, false)),
                        (GeneratorTangle::CondExpMinus, Ok(px)) => (m.cond_exp(x, true).and_then(|z| self.phi(&z)), pa.cond_exp(px, true)),
                        (GeneratorTangle::CondExpPrime, Ok(px)) => (m.cond_exp_prime(x).and_then(|z| self.phi(&z)), pa.cond_exp_prime(px)),
                        (GeneratorTangle::Adjoint, Ok(px)) => (self.phi(&m.adjoint_element(x)), Ok(pa.adjoint(px))),
                        _ => unreachable!("handled above"),
                    };
                    compare(&mut outcome, alloc::format!("basis {a}"), lhs, rhs);
                }
            }
        }
        outcome
    }

    /// Runs the whole plan sequentially.
    pub fn verify_morphism(&self, depth: u32) -> MorphismReport {
        let checks = PhiMap::verification_plan(depth).into_iter().map(|(t, c)| self.run_check(t, c)).collect();
        MorphismReport { depth, checks }
    }
}

/// The generating tangles (plus trace, adjoint and bijectivity) checked
/// against φ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GeneratorTangle {
    Bijection,
    Unit,
    Inclusion,
    Multiplication,
    CondExp,
    CondExpMinus,
    CondExpPrime,
    Jones,
    Adjoint,
    Trace,
}

impl GeneratorTangle {
    pub fn name(self) -> &'static str {
        match self {
            GeneratorTangle::Bijection => "bijection",
            GeneratorTangle::Unit => "unit",
            GeneratorTangle::Inclusion => "inclusion",
            GeneratorTangle::Multiplication => "multiplication",
            GeneratorTangle::CondExp => "cond_exp",
            GeneratorTangle::CondExpMinus => "cond_exp_0-",
            GeneratorTangle::CondExpPrime => "cond_exp_prime",
            GeneratorTangle::Jones => "jones",
            GeneratorTangle::Adjoint => "adjoint",
            GeneratorTangle::Trace => "trace",
        }
    }
}

impl fmt::Display for GeneratorTangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Result of one generator check at one input color.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckOutcome {
    pub tangle: GeneratorTangle,
    pub color: Color,
    pub basis_size: usize,
    pub cases: usize,
    pub counterexample: Option<String>,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MorphismReport {
    pub depth: u32,
    pub checks: Vec<CheckOutcome>,
}

impl MorphismReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckOutcome::passed)
    }

    pub fn first_failure(&self) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| !c.passed())
    }
}

/// `(1/|G|) Σ_C |C| (|C∩H||G| / (|C||H|))^k`, which must be an integer.
pub fn poincare_dimension(cosets: &CosetSpace, k: u32) -> Result<usize> {
    let g = cosets.group().order() as i128;
    let h = cosets.subgroup().order() as i128;
    let mut total = Rational::zero();
    for class in conjugacy_classes(cosets.group(), cosets.subgroup()) {
        let size = class.members.len() as i128;
        let fixed = Rational::new(class.in_subgroup as i128 * g, size * h);
        total += Rational::from_integer(size) * num_traits::pow(fixed, k as usize);
    }
    let value = total / Rational::from_integer(g);
    if !value.is_integer() || value < Rational::zero() {
        return Err(Error::Inconsistent(alloc::format!("class formula gives {value} at k = {k}")));
    }
    Ok(*value.numer() as usize)
}

/// Number of `G`-orbits on `(H\G)^k` by Burnside's lemma.
pub fn burnside_dimension(cosets: &CosetSpace, k: u32) -> Result<usize> {
    let codec = TupleCodec::new(cosets.index(), k as usize);
    let domain: Vec<Vec<u32>> = codec.iter().collect();
    let elements: Vec<Elem> = cosets.group().elements().collect();
    burnside_count(&elements, &domain, |g, t| t.iter().map(|&i| cosets.beta1(g, i)).collect())
}

/// One row of the dimension table: the same number computed four ways.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimensionRow {
    pub color: u32,
    pub formula: usize,
    pub burnside: usize,
    pub matrix_model: usize,
    pub loop_model: usize,
}

impl DimensionRow {
    pub fn agree(&self) -> bool {
        self.formula == self.burnside && self.burnside == self.matrix_model && self.matrix_model == self.loop_model
    }
}

pub fn dimension_row(phi: &PhiMap, k: u32) -> Result<DimensionRow> {
    let color = Color::Positive(k);
    Ok(DimensionRow {
        color: k,
        formula: poincare_dimension(phi.cosets(), k)?,
        burnside: burnside_dimension(phi.cosets(), k)?,
        matrix_model: phi.model().dimension(color),
        loop_model: phi.loops().dimension_by_rank(color),
    })
}

pub fn dimension_table(phi: &PhiMap, depth: u32) -> Result<Vec<DimensionRow>> {
    (1..=depth).map(|k| dimension_row(phi, k)).collect()
}

/// The color of the flipped element: `0±` are exchanged.
pub fn flipped_color(color: Color) -> Color {
    match color {
        Color::ZeroPlus => Color::ZeroMinus,
        Color::ZeroMinus => Color::ZeroPlus,
        c => c,
    }
}

/// The loop-level isomorphism `P_k(Γ) → P_k(Γ̄)`: rotate each loop by one
/// step and weight it by `µ_{π_0} µ_{π_k} / (µ_{π_1} µ_{π_{k+1}})`. At
/// colors `0±` it relabels the vertex.
pub fn flip_dual_map(pa: &GraphPlanarAlgebra, x: &PAElement) -> PAElement {
    let graph = pa.graph();
    let spin = pa.spin();
    let color = x.color();
    let k = color.half_len();
    let terms = x.terms().map(|(l, c)| {
        let relabel = |l: &Loop| l.mapped(|v| graph.flip_vertex(v), |e| e);
        if color.is_zero() {
            return (relabel(l), c.clone());
        }
        let num = spin.value(l.vertex(0)) * spin.value(l.vertex(k));
        let den = spin.value(l.vertex(1)) * spin.value(l.vertex(k + 1));
        (relabel(&l.rotated(1)), c * &num.checked_div(&den).expect("positive spins"))
    });
    PAElement::from_terms(flipped_color(color), terms)
}

/// Flip duality at one color.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlipRow {
    pub color: Color,
    pub loops: usize,
    pub bijective: bool,
    pub equivariant: bool,
    pub dimension: usize,
    pub flipped_dimension: usize,
}

impl FlipRow {
    pub fn passed(&self) -> bool {
        self.bijective && self.equivariant && self.dimension == self.flipped_dimension
    }
}

/// Checks that the flip map is a `G`-equivariant bijection on loops and that
/// the invariant dimensions match, for colors `0±, 1, …, max_color`.
pub fn flip_duality_check(ctx: &InvariantContext, max_color: u32) -> Result<Vec<FlipRow>> {
    let flipped = ctx.flip()?;
    let pa = ctx.algebra();
    let fpa = flipped.algebra();
    let mut colors = alloc::vec![Color::ZeroPlus, Color::ZeroMinus];
    colors.extend((1..=max_color).map(Color::Positive));
    let mut rows = Vec::new();
    for color in colors {
        let loops = pa.enumerate_loops(color);
        let mut images = alloc::collections::BTreeSet::new();
        let mut bijective = true;
        let mut equivariant = true;
        for l in &loops {
            let x = PAElement::from_loop(color, l.clone());
            let y = flip_dual_map(pa, &x);
            match y.terms().next() {
                Some((m, c)) if y.len() == 1 && !c.is_zero() && m.is_valid(fpa.graph()) => {
                    images.insert(m.clone());
                }
                _ => bijective = false,
            }
            for g in ctx.action().elements() {
                if flip_dual_map(pa, &ctx.act(g, &x)) != flipped.act(g, &y) {
                    equivariant = false;
                }
            }
        }
        bijective &= images.len() == loops.len() && loops.len() == fpa.enumerate_loops(flipped_color(color)).len();
        rows.push(FlipRow {
            color,
            loops: loops.len(),
            bijective,
            equivariant,
            dimension: ctx.dimension(color),
            flipped_dimension: flipped.dimension(flipped_color(color)),
        });
    }
    Ok(rows)
}

/// The chain `P(⋆_n)^{S_n} ⊆ P(⋆_n)^G ⊆ P(⋆_n)` at one color.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SandwichRow {
    pub color: Color,
    pub symmetric_dimension: usize,
    pub group_dimension: usize,
    pub full_dimension: usize,
    pub contained: bool,
}

impl SandwichRow {
    pub fn passed(&self) -> bool {
        self.contained && self.symmetric_dimension <= self.group_dimension && self.group_dimension <= self.full_dimension
    }
}

/// The full symmetric group of the even vertices acting on ⋆_n.
pub fn symmetric_context(pa: &GraphPlanarAlgebra, max_order: usize) -> Result<InvariantContext> {
    let n = pa.graph().num_even();
    let graph = pa.graph();
    let action = if n <= 1 {
        GraphAction::trivial(graph)
    } else {
        let sym = builtin_group(&alloc::format!("S{n}"), max_order)?;
        let at = |g: Elem, v: u32| sym.perm(sym.inv(g)).apply(v);
        GraphAction::new(&sym, graph, pa.spin(), |g, v| if (v as usize) < n { at(g, v) } else { v }, at)?
    };
    InvariantContext::new(pa.clone(), action)
}

pub fn sandwich_check(ctx: &InvariantContext, max_color: u32, max_order: usize) -> Result<Vec<SandwichRow>> {
    let sym = symmetric_context(ctx.algebra(), max_order)?;
    let graph = ctx.algebra().graph();
    let mut colors = alloc::vec![Color::ZeroPlus, Color::ZeroMinus];
    colors.extend((1..=max_color).map(Color::Positive));
    colors
        .into_iter()
        .map(|color| {
            let sym_basis = sym.invariant_basis(color);
            let group_basis = ctx.invariant_basis(color);
            let inner = sym_basis.iter().all(|x| ctx.is_invariant(x));
            let outer = group_basis.iter().all(|x| x.terms().all(|(l, _)| l.is_valid(graph) && l.len() == 2 * color.half_len()));
            Ok(SandwichRow {
                color,
                symmetric_dimension: sym_basis.len(),
                group_dimension: group_basis.len(),
                full_dimension: ctx.algebra().enumerate_loops(color).len(),
                contained: inner && outer,
            })
        })
        .collect()
}

/// One relation of a verification suite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationCheck {
    pub model: &'static str,
    pub relation: String,
    pub passed: bool,
}

/// `e_m² = e_m = e_m*`, `e_m e_{m±1} e_m = n⁻¹ e_m` and `tr(e_m) = n⁻¹` for
/// `e_m = δ⁻¹ Z_{jones}(m+1)`, `1 ≤ m ≤ max_m`.
pub fn temperley_lieb_checks<M: TangleModel>(model: &M, name: &'static str, max_m: u32) -> Result<Vec<RelationCheck>> {
    let delta = model.delta()?;
    let delta_inv = delta.inv().ok_or(Error::NoModulus)?;
    let tau = delta_inv.pow(2);
    let e = |m: u32| model.jones_element(Color::Positive(m + 1)).map(|x| model.scale(&x, &delta_inv));
    let mut out = Vec::new();
    let mut push = |relation: String, passed: bool| out.push(RelationCheck { model: name, relation, passed });
    for m in 1..=max_m {
        let em = e(m)?;
        push(alloc::format!("e{m}^2 = e{m}"), model.multiply(&em, &em)? == em);
        push(alloc::format!("e{m}* = e{m}"), model.adjoint(&em) == em);
        push(alloc::format!("tr(e{m}) = 1/n"), model.trace(&em)? == tau);
        let next = e(m + 1)?;
        let up = model.include(&em)?;
        let lhs = model.multiply(&model.multiply(&up, &next)?, &up)?;
        push(alloc::format!("e{m} e{} e{m} = e{m}/n", m + 1), lhs == model.scale(&up, &tau));
        let lhs = model.multiply(&model.multiply(&next, &up)?, &next)?;
        push(alloc::format!("e{} e{m} e{} = e{}/n", m + 1, m + 1, m + 1), lhs == model.scale(&next, &tau));
    }
    Ok(out)
}

/// `φ(ẽ_m) = δ⁻¹ Z_{jones}(m+1)` for `1 ≤ m ≤ max_m`.
pub fn jones_image_checks(phi: &PhiMap, max_m: u32) -> Result<Vec<RelationCheck>> {
    let model = phi.model();
    let pa = phi.algebra();
    let delta_inv = model.delta().inv().expect("positive index");
    (1..=max_m)
        .map(|m| {
            let color = Color::Positive(m + 1);
            let e = model.element(color, model.jones_projection(m)?)?;
            let passed = phi.phi(&e)? == pa.jones_element(color)?.scaled(&delta_inv);
            Ok(RelationCheck { model: "phi", relation: alloc::format!("phi(e{m}) = jones({})/d", m + 1), passed })
        })
        .collect()
}

/// `tr(Σ_h h[i,j]^{ev})` in the matrix model and through φ.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceRow {
    pub color: Color,
    pub rows: Vec<u32>,
    pub cols: Vec<u32>,
    pub expected: Rational,
    pub model_value: Rational,
    pub loop_value: Scalar,
}

impl TraceRow {
    pub fn passed(&self) -> bool {
        self.model_value == self.expected && self.loop_value == Scalar::from_rational(self.expected)
    }
}

/// Trace values of the orbit sums at even levels `r ≤ max_r`, against
/// `|H|/n^r δ_{ij}`.
pub fn trace_checks(phi: &PhiMap, max_r: usize) -> Result<Vec<TraceRow>> {
    let model = phi.model();
    let h = model.cosets().subgroup().order() as i128;
    let n = model.index() as i128;
    let mut rows = Vec::new();
    for r in 0..=max_r {
        let level = Level::even(r);
        let color = Color::Positive(2 * r as u32 + 1);
        let codec = model.codec(r);
        let orbits = model.pair_orbits(level, Commutant::OfN);
        for (orbit, x) in orbits.members.iter().zip(model.orbit_basis(level, Commutant::OfN)) {
            let (a, b) = orbit[0];
            let expected = if a == b { Rational::new(h, n.pow(r as u32)) } else { Rational::zero() };
            let element = model.element(color, x)?;
            rows.push(TraceRow {
                color,
                rows: codec.decode(a as usize),
                cols: codec.decode(b as usize),
                expected,
                model_value: model.trace(element.matrix()),
                loop_value: phi.algebra().trace(&phi.phi(&element)?)?,
            });
        }
    }
    Ok(rows)
}

/// Both sides of the morphism square for a composite expression: φ of the
/// matrix-model value, and the loop-model value on the φ-images of the
/// bindings.
#[derive(Clone, Debug, PartialEq)]
pub struct CompositeOutcome {
    pub through_matrix: PAElement,
    pub through_loops: PAElement,
}

impl CompositeOutcome {
    pub fn agree(&self) -> bool {
        self.through_matrix == self.through_loops
    }
}

pub fn composite_check(phi: &PhiMap, expr: &TangleExpr, bindings: &BTreeMap<String, ModelElement>) -> Result<CompositeOutcome> {
    let loop_bindings = bindings.iter().map(|(k, v)| Ok((k.clone(), phi.phi(v)?))).collect::<Result<BTreeMap<_, _>>>()?;
    Ok(CompositeOutcome {
        through_matrix: phi.phi(&evaluate(expr, phi.model(), bindings)?)?,
        through_loops: evaluate(expr, phi.algebra(), &loop_bindings)?,
    })
}

/// A rational combination of basis elements, as used by property tests.
pub fn combination(basis: &[ModelElement], coeffs: &[Rational]) -> Result<ModelElement> {
    let first = basis.first().ok_or_else(|| Error::Inconsistent("empty basis".into()))?;
    let mut acc = first.scaled(&Scalar::zero());
    for (b, c) in basis.iter().zip(coeffs) {
        acc = acc.plus(&b.scaled(&Scalar::from_rational(*c)))?;
    }
    Ok(acc)
}
