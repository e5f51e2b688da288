//! Serializable reports and their table/CSV renderings.

use std::fmt::Write as _;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn from_bool(ok: bool) -> Status {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn passed(self) -> bool {
        self == Status::Pass
    }

    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PairInfo {
    pub group: String,
    pub subgroup: String,
    pub group_order: usize,
    pub subgroup_order: usize,
    pub index: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct DimsRow {
    pub k: u32,
    pub formula: usize,
    pub burnside: usize,
    pub matrix_model: usize,
    pub loop_model: usize,
    pub status: Status,
}

#[derive(Clone, Debug, Serialize)]
pub struct DimsReport {
    pub pair: PairInfo,
    pub depth: u32,
    pub rows: Vec<DimsRow>,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub tangle: String,
    pub color: String,
    pub basis_size: usize,
    pub cases: usize,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationRecord {
    pub model: String,
    pub relation: String,
    pub status: Status,
}

#[derive(Clone, Debug, Serialize)]
pub struct TraceRecord {
    pub color: String,
    pub rows: Vec<u32>,
    pub cols: Vec<u32>,
    pub expected: String,
    pub model_value: String,
    pub loop_value: String,
    pub status: Status,
}

#[derive(Clone, Debug, Serialize)]
pub struct SandwichRecord {
    pub color: String,
    pub symmetric: usize,
    pub group: usize,
    pub full: usize,
    pub contained: bool,
    pub status: Status,
}

#[derive(Clone, Debug, Serialize)]
pub struct FlipRecord {
    pub color: String,
    pub loops: usize,
    pub bijective: bool,
    pub equivariant: bool,
    pub dimension: usize,
    pub flipped_dimension: usize,
    pub status: Status,
}

#[derive(Clone, Debug, Serialize)]
pub struct StructureRecord {
    pub predicate: String,
    pub by_group: String,
    pub by_algebra: String,
    pub status: Status,
}

#[derive(Clone, Debug, Serialize)]
pub struct CompositeRecord {
    pub expression: String,
    pub color: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub pair: PairInfo,
    pub depth: u32,
    pub seed: u64,
    pub checks: Vec<CheckRecord>,
    pub dims: Vec<DimsRow>,
    pub temperley_lieb: Vec<RelationRecord>,
    pub traces: Vec<TraceRecord>,
    pub sandwich: Vec<SandwichRecord>,
    pub flip: Vec<FlipRecord>,
    pub structure: Vec<StructureRecord>,
    pub composites: Vec<CompositeRecord>,
    pub errors: Vec<String>,
    pub passed: bool,
}

impl VerifyReport {
    pub fn compute_passed(&self) -> bool {
        self.errors.is_empty()
            && self.checks.iter().all(|c| c.status.passed())
            && self.dims.iter().all(|c| c.status.passed())
            && self.temperley_lieb.iter().all(|c| c.status.passed())
            && self.traces.iter().all(|c| c.status.passed())
            && self.sandwich.iter().all(|c| c.status.passed())
            && self.flip.iter().all(|c| c.status.passed())
            && self.structure.iter().all(|c| c.status.passed())
            && self.composites.iter().all(|c| c.status.passed())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BasisReport {
    pub side: String,
    pub color: String,
    pub dimension: usize,
    pub elements: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct EvalRecord {
    pub expression: String,
    pub color: String,
    pub matrix: String,
    pub phi_of_matrix: String,
    pub loop_value: String,
    pub status: Status,
}

#[derive(Clone, Debug, Serialize)]
pub struct EvalReport {
    pub pair: PairInfo,
    pub results: Vec<EvalRecord>,
    pub passed: bool,
}

/// Plain-text and CSV renderings; JSON goes through serde.
pub trait Render: Serialize {
    fn table(&self) -> String;
    fn csv(&self) -> String;
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn csv_line(fields: &[String]) -> String {
    let mut line = fields.iter().map(|f| csv_field(f)).collect::<Vec<_>>().join(",");
    line.push('\n');
    line
}

impl PairInfo {
    fn header(&self) -> String {
        format!("{} ⊃ {}  (|G| = {}, |H| = {}, n = {})\n", self.group, self.subgroup, self.group_order, self.subgroup_order, self.index)
    }
}

fn dims_table(rows: &[DimsRow]) -> String {
    let mut out = format!("{:>3} {:>9} {:>9} {:>13} {:>11}  status\n", "k", "formula", "burnside", "matrix_model", "loop_model");
    for r in rows {
        let _ = writeln!(
            out,
            "{:>3} {:>9} {:>9} {:>13} {:>11}  {}",
            r.k,
            r.formula,
            r.burnside,
            r.matrix_model,
            r.loop_model,
            r.status.label()
        );
    }
    out
}

impl Render for DimsReport {
    fn table(&self) -> String {
        self.pair.header() + &dims_table(&self.rows)
    }

    fn csv(&self) -> String {
        let mut out = csv_line(&["k", "formula", "burnside", "matrix_model", "loop_model", "status"].map(String::from));
        for r in &self.rows {
            out += &csv_line(&[
                r.k.to_string(),
                r.formula.to_string(),
                r.burnside.to_string(),
                r.matrix_model.to_string(),
                r.loop_model.to_string(),
                r.status.label().to_string(),
            ]);
        }
        out
    }
}

impl Render for VerifyReport {
    fn table(&self) -> String {
        let mut out = self.pair.header();
        let _ = writeln!(out, "depth {}, seed {}\n", self.depth, self.seed);
        out += "generator checks\n";
        for c in &self.checks {
            let _ = writeln!(
                out,
                "  {:<15} color {:<3} basis {:>4} cases {:>6}  {}",
                c.tangle,
                c.color,
                c.basis_size,
                c.cases,
                c.status.label()
            );
            if let Some(ce) = &c.counterexample {
                let _ = writeln!(out, "    {ce}");
            }
        }
        out += "\ndimensions\n";
        out += &dims_table(&self.dims);
        out += "\nTemperley-Lieb relations\n";
        for r in &self.temperley_lieb {
            let _ = writeln!(out, "  {:<7} {:<28} {}", r.model, r.relation, r.status.label());
        }
        out += "\ntraces of orbit sums\n";
        for t in &self.traces {
            let _ = writeln!(
                out,
                "  color {:<2} [{:?};{:?}] expected {} model {} loops {}  {}",
                t.color,
                t.rows,
                t.cols,
                t.expected,
                t.model_value,
                t.loop_value,
                t.status.label()
            );
        }
        out += "\nsandwich S_n ⊆ G ⊆ all\n";
        for s in &self.sandwich {
            let _ = writeln!(out, "  color {:<3} {:>5} {:>5} {:>6}  {}", s.color, s.symmetric, s.group, s.full, s.status.label());
        }
        out += "\nflip duality\n";
        for f in &self.flip {
            let _ = writeln!(
                out,
                "  color {:<3} loops {:>5} bijective {:<5} equivariant {:<5} dims {} / {}  {}",
                f.color,
                f.loops,
                f.bijective,
                f.equivariant,
                f.dimension,
                f.flipped_dimension,
                f.status.label()
            );
        }
        out += "\nstructure of the star graph context\n";
        for s in &self.structure {
            let _ = writeln!(out, "  {:<12} group {:<10} algebra {:<10} {}", s.predicate, s.by_group, s.by_algebra, s.status.label());
        }
        let failed = self.composites.iter().filter(|c| !c.status.passed()).count();
        let _ = writeln!(out, "\nrandom composite tangles: {} checked, {} failed", self.composites.len(), failed);
        for c in self.composites.iter().filter(|c| !c.status.passed()) {
            let _ = writeln!(out, "  {}  {}", c.expression, c.detail.as_deref().unwrap_or(""));
        }
        for e in &self.errors {
            let _ = writeln!(out, "error: {e}");
        }
        let _ = writeln!(out, "\noverall: {}", Status::from_bool(self.passed).label());
        out
    }

    fn csv(&self) -> String {
        let mut out = csv_line(&["suite", "item", "color", "detail", "status"].map(String::from));
        let mut row = |suite: &str, item: String, color: String, detail: String, status: Status| {
            out += &csv_line(&[suite.to_string(), item, color, detail, status.label().to_string()]);
        };
        for c in &self.checks {
            row("generator", c.tangle.clone(), c.color.clone(), c.counterexample.clone().unwrap_or_default(), c.status);
        }
        for d in &self.dims {
            let detail = format!("{} {} {} {}", d.formula, d.burnside, d.matrix_model, d.loop_model);
            row("dimension", "dims".into(), d.k.to_string(), detail, d.status);
        }
        for r in &self.temperley_lieb {
            row("temperley_lieb", r.relation.clone(), String::new(), r.model.clone(), r.status);
        }
        for t in &self.traces {
            row(
                "trace",
                format!("{:?};{:?}", t.rows, t.cols),
                t.color.clone(),
                format!("{} {} {}", t.expected, t.model_value, t.loop_value),
                t.status,
            );
        }
        for s in &self.sandwich {
            row("sandwich", "chain".into(), s.color.clone(), format!("{} {} {}", s.symmetric, s.group, s.full), s.status);
        }
        for f in &self.flip {
            row("flip", "dual".into(), f.color.clone(), format!("{} {}", f.dimension, f.flipped_dimension), f.status);
        }
        for s in &self.structure {
            row("structure", s.predicate.clone(), String::new(), format!("{} {}", s.by_group, s.by_algebra), s.status);
        }
        for c in &self.composites {
            row("composite", c.expression.clone(), c.color.clone(), c.detail.clone().unwrap_or_default(), c.status);
        }
        for e in &self.errors {
            row("error", e.clone(), String::new(), String::new(), Status::Fail);
        }
        out
    }
}

impl Render for BasisReport {
    fn table(&self) -> String {
        let mut out = format!("{} basis at color {}: dimension {}\n", self.side, self.color, self.dimension);
        for (i, e) in self.elements.iter().enumerate() {
            let _ = writeln!(out, "  #{}  {}", i + 1, e);
        }
        out
    }

    fn csv(&self) -> String {
        let mut out = csv_line(&["index", "element"].map(String::from));
        for (i, e) in self.elements.iter().enumerate() {
            out += &csv_line(&[(i + 1).to_string(), e.clone()]);
        }
        out
    }
}

impl Render for EvalReport {
    fn table(&self) -> String {
        let mut out = self.pair.header();
        for r in &self.results {
            let _ = writeln!(out, "{}  (color {})  {}", r.expression, r.color, r.status.label());
            let _ = writeln!(out, "  matrix model:      {}", r.matrix);
            let _ = writeln!(out, "  phi(matrix model): {}", r.phi_of_matrix);
            let _ = writeln!(out, "  loop model:        {}", r.loop_value);
        }
        out
    }

    fn csv(&self) -> String {
        let mut out = csv_line(&["expression", "color", "matrix", "phi_of_matrix", "loop", "status"].map(String::from));
        for r in &self.results {
            out += &csv_line(&[
                r.expression.clone(),
                r.color.clone(),
                r.matrix.clone(),
                r.phi_of_matrix.clone(),
                r.loop_value.clone(),
                r.status.label().to_string(),
            ]);
        }
        out
    }
}
