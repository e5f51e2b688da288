//! The work behind each subcommand, independent of argument parsing and
//! output.

use std::collections::BTreeMap;

use pln_core::graph::GraphAction;
use pln_core::group::{GroupPair, DEFAULT_MAX_ORDER};
use pln_core::invariant::InvariantContext;
use pln_core::iso::{
    composite_check, dimension_table, flip_duality_check, jones_image_checks, sandwich_check, temperley_lieb_checks, trace_checks, PhiMap,
    RelationCheck,
};
use pln_core::model::{ModelElement, SubfactorModel};
use pln_core::planar::{Color, GraphPlanarAlgebra};
use pln_core::scalar::format_rational;
use pln_core::tangle::{parse, TangleExpr};
use pln_core::Scalar;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::expr_gen::{variable_name, ExprGenerator};
use crate::report::{
    CheckRecord, CompositeRecord, DimsReport, DimsRow, EvalRecord, EvalReport, FlipRecord, PairInfo, RelationRecord, SandwichRecord,
    Status, StructureRecord, TraceRecord, VerifyReport,
};

pub const MAX_ORDER_VAR: &str = "PLN_MAX_GROUP_ORDER";

/// The group-order cap from the environment.
pub fn max_group_order() -> Result<usize, String> {
    match std::env::var(MAX_ORDER_VAR) {
        Ok(v) => {
            v.trim().parse().ok().filter(|&n: &usize| n > 0).ok_or_else(|| format!("{MAX_ORDER_VAR} must be a positive integer, got `{v}`"))
        }
        Err(_) => Ok(DEFAULT_MAX_ORDER),
    }
}

/// Depth used when none is given, chosen so that a full verification stays
/// within about a minute.
pub fn default_depth(index: usize) -> u32 {
    match index {
        0..=3 => 5,
        4 => 4,
        5..=6 => 3,
        _ => 2,
    }
}

/// A resolved pair with both models and φ.
pub struct Session {
    pub info: PairInfo,
    pub phi: PhiMap,
}

impl Session {
    pub fn new(pair: GroupPair) -> Result<Session, pln_core::Error> {
        let info = PairInfo {
            group: pair.group_name.clone(),
            subgroup: pair.subgroup_name.clone(),
            group_order: pair.group.order(),
            subgroup_order: pair.subgroup.order(),
            index: pair.group.order() / pair.subgroup.order(),
        };
        Ok(Session { info, phi: PhiMap::new(pair.into_coset_space())? })
    }

    pub fn model(&self) -> &SubfactorModel {
        self.phi.model()
    }
}

fn color_label(c: Color) -> String {
    c.to_string()
}

pub fn dims(session: &Session, depth: u32) -> Result<DimsReport, pln_core::Error> {
    let rows: Vec<DimsRow> = dimension_table(&session.phi, depth)?
        .into_iter()
        .map(|r| DimsRow {
            k: r.color,
            formula: r.formula,
            burnside: r.burnside,
            matrix_model: r.matrix_model,
            loop_model: r.loop_model,
            status: Status::from_bool(r.agree()),
        })
        .collect();
    let passed = rows.iter().all(|r| r.status.passed());
    Ok(DimsReport { pair: session.info.clone(), depth, rows, passed })
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub depth: u32,
    pub seed: u64,
    pub samples: usize,
    pub max_order: usize,
}

fn relation_records(checks: pln_core::Result<Vec<RelationCheck>>, errors: &mut Vec<String>) -> Vec<RelationRecord> {
    match checks {
        Ok(cs) => cs
            .into_iter()
            .map(|c| RelationRecord { model: c.model.into(), relation: c.relation, status: Status::from_bool(c.passed) })
            .collect(),
        Err(e) => {
            errors.push(e.to_string());
            Vec::new()
        }
    }
}

/// Random composite expressions checked through φ.
pub fn composite_records(phi: &PhiMap, seed: u64, samples: usize, max_color: u32, max_depth: usize) -> Vec<CompositeRecord> {
    let mut generator = ExprGenerator::new(ChaCha8Rng::seed_from_u64(seed), max_color);
    let bindings = generator.bindings(phi);
    let exprs: Vec<TangleExpr> = (0..samples)
        .map(|_| {
            let c = generator.random_color();
            generator.expr(c, max_depth)
        })
        .collect();
    exprs
        .par_iter()
        .map(|e| {
            let (status, detail) = match composite_check(phi, e, &bindings) {
                Ok(o) if o.agree() => (Status::Pass, None),
                Ok(o) => {
                    let g = phi.algebra().graph();
                    (
                        Status::Fail,
                        Some(format!("through matrix {} but through loops {}", o.through_matrix.describe(g), o.through_loops.describe(g))),
                    )
                }
                Err(err) => (Status::Fail, Some(err.to_string())),
            };
            CompositeRecord { expression: e.to_string(), color: color_label(e.color), status, detail }
        })
        .collect()
}

fn structure_records(ctx: &InvariantContext, index: usize) -> Vec<StructureRecord> {
    let yes_no = |b: bool| if b { "yes".to_string() } else { "no".to_string() };
    let connected = ctx.is_connected();
    let irreducible = ctx.is_irreducible();
    let modulus = ctx.modulus();
    let show = |m: &Option<Scalar>| m.as_ref().map_or("none".to_string(), Scalar::to_string);
    let expected = Some(Scalar::sqrt_int(index as u64));
    vec![
        StructureRecord {
            predicate: "connected".into(),
            by_group: yes_no(connected.by_group),
            by_algebra: yes_no(connected.by_algebra),
            status: Status::from_bool(connected.agree() && connected.by_group),
        },
        StructureRecord {
            predicate: "modulus".into(),
            by_group: show(&modulus.by_group),
            by_algebra: show(&modulus.by_algebra),
            status: Status::from_bool(modulus.agree() && modulus.by_group == expected),
        },
        StructureRecord {
            predicate: "irreducible".into(),
            by_group: yes_no(irreducible.by_group),
            by_algebra: yes_no(irreducible.by_algebra),
            status: Status::from_bool(irreducible.agree()),
        },
    ]
}

/// Every suite of `pln verify`. Work inside a suite runs on the current
/// rayon pool; the report order is fixed.
pub fn verify(session: &Session, opts: &VerifyOptions) -> VerifyReport {
    let phi = &session.phi;
    let depth = opts.depth;
    let mut errors = Vec::new();
    let plan = PhiMap::verification_plan(depth);
    let checks = plan
        .par_iter()
        .map(|&(t, c)| phi.run_check(t, c))
        .collect::<Vec<_>>()
        .into_iter()
        .map(|o| CheckRecord {
            tangle: o.tangle.name().into(),
            color: color_label(o.color),
            basis_size: o.basis_size,
            cases: o.cases,
            status: Status::from_bool(o.passed()),
            counterexample: o.counterexample,
        })
        .collect();
    let dims = match self::dims(session, depth) {
        Ok(r) => r.rows,
        Err(e) => {
            errors.push(e.to_string());
            Vec::new()
        }
    };
    let max_m = depth.saturating_sub(1).min(4);
    let mut temperley_lieb = relation_records(temperley_lieb_checks(phi.model(), "matrix", max_m), &mut errors);
    temperley_lieb.extend(relation_records(temperley_lieb_checks(phi.algebra(), "loop", max_m), &mut errors));
    temperley_lieb.extend(relation_records(jones_image_checks(phi, max_m), &mut errors));
    let traces = match trace_checks(phi, (depth.saturating_sub(1) / 2).min(2) as usize) {
        Ok(rows) => rows
            .into_iter()
            .map(|t| TraceRecord {
                color: color_label(t.color),
                rows: t.rows.iter().map(|i| i + 1).collect(),
                cols: t.cols.iter().map(|i| i + 1).collect(),
                expected: format_rational(&t.expected),
                model_value: format_rational(&t.model_value),
                loop_value: t.loop_value.to_string(),
                status: Status::from_bool(t.passed()),
            })
            .collect(),
        Err(e) => {
            errors.push(e.to_string());
            Vec::new()
        }
    };
    let small = depth.min(4);
    let sandwich = match sandwich_check(phi.loops(), small, opts.max_order) {
        Ok(rows) => rows
            .into_iter()
            .map(|s| SandwichRecord {
                color: color_label(s.color),
                symmetric: s.symmetric_dimension,
                group: s.group_dimension,
                full: s.full_dimension,
                contained: s.contained,
                status: Status::from_bool(s.passed()),
            })
            .collect(),
        Err(e) => {
            errors.push(format!("sandwich: {e}"));
            Vec::new()
        }
    };
    let flip = match flip_duality_check(phi.loops(), small) {
        Ok(rows) => rows
            .into_iter()
            .map(|f| FlipRecord {
                color: color_label(f.color),
                loops: f.loops,
                bijective: f.bijective,
                equivariant: f.equivariant,
                dimension: f.dimension,
                flipped_dimension: f.flipped_dimension,
                status: Status::from_bool(f.passed()),
            })
            .collect(),
        Err(e) => {
            errors.push(format!("flip: {e}"));
            Vec::new()
        }
    };
    let structure = structure_records(phi.loops(), session.info.index);
    let composites = composite_records(phi, opts.seed, opts.samples, small, 4);
    let mut report = VerifyReport {
        pair: session.info.clone(),
        depth,
        seed: opts.seed,
        checks,
        dims,
        temperley_lieb,
        traces,
        sandwich,
        flip,
        structure,
        composites,
        errors,
        passed: false,
    };
    report.passed = report.compute_passed();
    report
}

/// `c·(perm)` terms of a group-algebra entry, with 1-based points.
pub fn render_model(model: &SubfactorModel, x: &ModelElement) -> String {
    let group = model.group();
    let codec = model.codec(x.matrix().level().tuple_len);
    let tuple = |code: u32| codec.decode(code as usize).iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(" ");
    let mut parts = Vec::new();
    for ((a, b), entry) in x.matrix().entries() {
        let terms: Vec<String> = entry
            .terms()
            .map(|(g, c)| {
                let perm = group.perm(g).to_string();
                if *c == pln_core::Rational::from_integer(1) {
                    perm
                } else {
                    format!("{}{}", format_rational(c), perm)
                }
            })
            .collect();
        parts.push(format!("[{};{}] {}", tuple(a), tuple(b), terms.join(" + ")));
    }
    let body = if parts.is_empty() { "0".to_string() } else { parts.join(", ") };
    if *x.factor() == Scalar::one() {
        format!("{}: {body}", x.matrix().level())
    } else {
        format!("{} * {}: {body}", x.factor(), x.matrix().level())
    }
}

pub fn loop_basis(ctx: &InvariantContext, color: Color) -> Vec<String> {
    let g = ctx.algebra().graph();
    ctx.invariant_basis(color).iter().map(|x| x.describe(g)).collect()
}

pub fn matrix_basis(session: &Session, color: Color) -> Vec<String> {
    session.phi.model_basis(color).iter().map(|x| render_model(session.model(), x)).collect()
}

/// Loops of a general graph with the trivial action.
pub fn graph_loop_basis(pa: GraphPlanarAlgebra, color: Color) -> Result<Vec<String>, pln_core::Error> {
    let action = GraphAction::trivial(pa.graph());
    let ctx = InvariantContext::new(pa, action)?;
    Ok(loop_basis(&ctx, color))
}

#[derive(thiserror::Error, Debug)]
pub enum EvalError {
    #[error("expression {line}: {source}")]
    Parse { line: usize, source: pln_core::tangle::ExprError },
    #[error("expression {line}: {source}")]
    Evaluate { line: usize, source: pln_core::Error },
}

/// Non-empty, non-comment lines of an expression file.
pub fn expression_lines(text: &str) -> Vec<(usize, String)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim().to_string()))
        .filter(|(_, l)| !l.is_empty())
        .collect()
}

/// Evaluates each expression in the matrix model and in the loop model and
/// compares them through φ. Unbound positive-color variables `x<k>` fall back
/// to random bindings from the seed.
pub fn eval(
    session: &Session,
    exprs: &[(usize, String)],
    bindings: &BTreeMap<String, ModelElement>,
    seed: u64,
) -> Result<EvalReport, EvalError> {
    let phi = &session.phi;
    let mut all = bindings.clone();
    let mut colors: BTreeMap<String, Color> = bindings.iter().map(|(k, v)| (k.clone(), v.color())).collect();
    for k in 1..=8 {
        colors.entry(variable_name(k)).or_insert(Color::Positive(k));
    }
    let mut parsed = Vec::new();
    for (line, text) in exprs {
        parsed.push((*line, parse(text, &colors).map_err(|source| EvalError::Parse { line: *line, source })?));
    }
    let needed =
        parsed.iter().flat_map(|(_, e)| e.variables()).filter(|(n, _)| !all.contains_key(n)).map(|(_, c)| c.half_len() as u32).max();
    if let Some(max_color) = needed {
        let mut generator = ExprGenerator::new(ChaCha8Rng::seed_from_u64(seed), max_color);
        for (name, value) in generator.bindings(phi) {
            all.entry(name).or_insert(value);
        }
    }
    let graph = phi.algebra().graph();
    let mut results = Vec::new();
    for (line, expr) in parsed {
        let fail = |source| EvalError::Evaluate { line, source };
        let matrix = pln_core::tangle::evaluate(&expr, phi.model(), &all).map_err(fail)?;
        let outcome = composite_check(phi, &expr, &all).map_err(fail)?;
        results.push(EvalRecord {
            expression: expr.to_string(),
            color: color_label(expr.color),
            matrix: render_model(phi.model(), &matrix),
            phi_of_matrix: outcome.through_matrix.describe(graph),
            loop_value: outcome.through_loops.describe(graph),
            status: Status::from_bool(outcome.agree()),
        });
    }
    let passed = results.iter().all(|r| r.status.passed());
    Ok(EvalReport { pair: session.info.clone(), results, passed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use pln_core::group::builtin_pair;

    fn session(name: &str) -> Session {
        Session::new(builtin_pair(name, DEFAULT_MAX_ORDER).unwrap()).unwrap()
    }

    #[test]
    fn dims_for_s3_s2() {
        let r = dims(&session("S3:S2"), 5).unwrap();
        assert!(r.passed);
        assert_eq!(r.rows.iter().map(|r| r.formula).collect::<Vec<_>>(), vec![1, 2, 5, 14, 41]);
    }

    #[test]
    fn verify_small_pair_passes() {
        let opts = VerifyOptions { depth: 3, seed: 1, samples: 10, max_order: DEFAULT_MAX_ORDER };
        let r = verify(&session("S3:S2"), &opts);
        assert!(r.passed, "{}", crate::report::Render::table(&r));
        assert!(!r.checks.is_empty() && !r.temperley_lieb.is_empty() && !r.traces.is_empty());
    }

    #[test]
    fn bases_have_the_table_dimensions() {
        let s = session("S3:S2");
        assert_eq!(loop_basis(s.phi.loops(), Color::Positive(2)).len(), 2);
        let m = matrix_basis(&s, Color::Positive(2));
        assert_eq!(m.len(), 2);
        assert!(m.iter().all(|e| e.starts_with("od1")));
    }

    #[test]
    fn eval_jones_matches_through_phi() {
        let s = session("S3:S2");
        let r = eval(&s, &[(1, "jones(2)".into()), (2, "condE1/d(mult(x3, incl(x2)))".into())], &BTreeMap::new(), 3).unwrap();
        assert!(r.passed);
        assert!(matches!(eval(&s, &[(4, "mult(x2, x3)".into())], &BTreeMap::new(), 3), Err(EvalError::Parse { line: 4, .. })));
    }

    #[test]
    fn expression_files_skip_comments() {
        let lines = expression_lines("# header\njones(2)  # trailing\n\n unit(0+)\n");
        assert_eq!(lines, vec![(2, "jones(2)".to_string()), (4, "unit(0+)".to_string())]);
    }
}
