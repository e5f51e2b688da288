//! Text formats for group pairs, general bipartite graphs and binding files.

use std::collections::BTreeMap;

use pln_core::graph::{BipartiteGraph, SpinFunction};
use pln_core::group::{builtin_pair, FiniteGroup, GroupPair, Perm, Subgroup};
use pln_core::iso::combination;
use pln_core::model::ModelElement;
use pln_core::planar::Color;
use pln_core::scalar::parse_rational;
use pln_core::{Rational, Scalar};
use serde::Deserialize;

#[derive(thiserror::Error, Debug)]
pub enum FormatError {
    #[error("group file, offset {offset}: expected {expected}, found {found}")]
    GroupSyntax { offset: usize, expected: String, found: String },
    #[error("graph file, line {line}: {reason}")]
    GraphSyntax { line: usize, reason: String },
    #[error("bindings: {0}")]
    Bindings(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Core(#[from] pln_core::Error),
}

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Ident(String),
    Str(String),
    Punct(char),
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>, FormatError> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(pos, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
        } else if "{}[]=,".contains(c) {
            out.push((pos, Token::Punct(c)));
            chars.next();
        } else if c == '"' {
            chars.next();
            let mut s = String::new();
            loop {
                match chars.next() {
                    Some((_, '"')) => break,
                    Some((_, ch)) => s.push(ch),
                    None => {
                        return Err(FormatError::GroupSyntax { offset: pos, expected: "closing `\"`".into(), found: "end of input".into() })
                    }
                }
            }
            out.push((pos, Token::Str(s)));
        } else if c.is_alphanumeric() || c == '_' {
            let mut s = String::new();
            while let Some(&(_, ch)) = chars.peek() {
                if ch.is_alphanumeric() || ch == '_' {
                    s.push(ch);
                    chars.next();
                } else {
                    break;
                }
            }
            out.push((pos, Token::Ident(s)));
        } else {
            return Err(FormatError::GroupSyntax { offset: pos, expected: "a token".into(), found: format!("`{c}`") });
        }
    }
    Ok(out)
}

struct GroupParser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    end: usize,
}

impl GroupParser {
    fn fail<T>(&self, expected: &str) -> Result<T, FormatError> {
        let (offset, found) = match self.tokens.get(self.pos) {
            Some((o, Token::Ident(s))) => (*o, format!("`{s}`")),
            Some((o, Token::Str(s))) => (*o, format!("\"{s}\"")),
            Some((o, Token::Punct(c))) => (*o, format!("`{c}`")),
            None => (self.end, "end of input".into()),
        };
        Err(FormatError::GroupSyntax { offset, expected: expected.into(), found })
    }

    fn punct(&mut self, c: char) -> Result<(), FormatError> {
        if self.tokens.get(self.pos).map(|t| &t.1) == Some(&Token::Punct(c)) {
            self.pos += 1;
            Ok(())
        } else {
            self.fail(&format!("`{c}`"))
        }
    }

    fn keyword(&mut self, word: &str) -> Result<(), FormatError> {
        match self.tokens.get(self.pos) {
            Some((_, Token::Ident(s))) if s == word => {
                self.pos += 1;
                Ok(())
            }
            _ => self.fail(&format!("`{word}`")),
        }
    }

    /// `name { generators = ["..", ..] }`
    fn block(&mut self, name: &str) -> Result<Vec<String>, FormatError> {
        self.keyword(name)?;
        self.punct('{')?;
        self.keyword("generators")?;
        self.punct('=')?;
        self.punct('[')?;
        let mut gens = Vec::new();
        loop {
            match self.tokens.get(self.pos) {
                Some((_, Token::Punct(']'))) => {
                    self.pos += 1;
                    break;
                }
                Some((_, Token::Str(s))) => {
                    gens.push(s.clone());
                    self.pos += 1;
                    match self.tokens.get(self.pos) {
                        Some((_, Token::Punct(','))) => self.pos += 1,
                        Some((_, Token::Punct(']'))) => {}
                        _ => return self.fail("`,` or `]`"),
                    }
                }
                _ => return self.fail("a quoted permutation or `]`"),
            }
        }
        self.punct('}')?;
        Ok(gens)
    }
}

/// Parses `group { generators = [...] } subgroup { generators = [...] }`
/// with permutations in 1-based cycle notation.
pub fn parse_group_spec(text: &str, max_order: usize) -> Result<GroupPair, FormatError> {
    let mut p = GroupParser { tokens: tokenize(text)?, pos: 0, end: text.len() };
    let group_gens = p.block("group")?;
    let sub_gens = p.block("subgroup")?;
    if p.pos != p.tokens.len() {
        return p.fail("end of input");
    }
    let parse = |gens: &[String]| gens.iter().map(|g| g.parse::<Perm>()).collect::<Result<Vec<_>, _>>();
    let group_perms = parse(&group_gens)?;
    let sub_perms = parse(&sub_gens)?;
    let degree = group_perms.iter().chain(&sub_perms).map(Perm::degree).max().unwrap_or(1).max(1);
    let widen = |ps: Vec<Perm>| ps.into_iter().map(|q| q.extended(degree)).collect::<Vec<_>>();
    let group = FiniteGroup::generate(&widen(group_perms), max_order)?;
    let subgroup = Subgroup::from_perms(&group, &widen(sub_perms))?;
    let name = |gens: &[String]| if gens.is_empty() { "<>".to_string() } else { format!("<{}>", gens.join(", ")) };
    Ok(GroupPair::new(name(&group_gens), name(&sub_gens), group, subgroup))
}

/// A `G:H` builtin pair or a group file, whichever was given.
pub fn resolve_pair(pair: Option<&str>, group_file: Option<&str>, max_order: usize) -> Result<GroupPair, FormatError> {
    match (pair, group_file) {
        (_, Some(text)) => parse_group_spec(text, max_order),
        (Some(spec), None) => Ok(builtin_pair(spec, max_order)?),
        (None, None) => Ok(builtin_pair("S3:S2", max_order)?),
    }
}

/// Parses a spin value: `n^(p/4)`, a rational `p/q`, or a decimal literal.
pub fn parse_spin(text: &str) -> Option<Scalar> {
    let text = text.trim();
    if let Some((base, exp)) = text.split_once('^') {
        let base: u64 = base.trim().parse().ok()?;
        let exp = exp.trim().strip_prefix('(')?.strip_suffix(')')?;
        let (p, q) = exp.split_once('/')?;
        if q.trim() != "4" || base == 0 {
            return None;
        }
        return Some(Scalar::quarter_power(base, p.trim().parse().ok()?));
    }
    if let Some(r) = parse_rational(text) {
        return Some(Scalar::from_rational(r));
    }
    text.parse::<f64>().ok().filter(|v| v.is_finite()).map(Scalar::from_f64)
}

/// Parses the graph interchange format:
///
/// ```text
/// even: a b
/// odd: x
/// edge: a x
/// edge: b x
/// spin: x = 2^(1/4)
/// ```
///
/// Vertices without a `spin` line get spin 1. `#` starts a comment.
pub fn parse_graph(text: &str) -> Result<(BipartiteGraph, SpinFunction), FormatError> {
    let mut even: Vec<String> = Vec::new();
    let mut odd: Vec<String> = Vec::new();
    let mut edges: Vec<(usize, String, String)> = Vec::new();
    let mut spins: Vec<(usize, String, String)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |reason: &str| FormatError::GraphSyntax { line: line_no, reason: reason.into() };
        let (key, rest) = line.split_once(':').ok_or_else(|| err("expected `key: value`"))?;
        let words: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
        match key.trim() {
            "even" => even.extend(words),
            "odd" => odd.extend(words),
            "edge" => match words.as_slice() {
                [a, b] => edges.push((line_no, a.clone(), b.clone())),
                _ => return Err(err("an edge names exactly two vertices")),
            },
            "spin" => {
                let (v, value) = rest.split_once('=').ok_or_else(|| err("expected `spin: <vertex> = <value>`"))?;
                spins.push((line_no, v.trim().to_string(), value.trim().to_string()));
            }
            other => return Err(err(&format!("unknown key `{other}`"))),
        }
    }
    let index: BTreeMap<&str, (bool, u32)> = even
        .iter()
        .enumerate()
        .map(|(i, v)| (v.as_str(), (true, i as u32)))
        .chain(odd.iter().enumerate().map(|(j, v)| (v.as_str(), (false, j as u32))))
        .collect();
    if index.len() != even.len() + odd.len() {
        return Err(FormatError::GraphSyntax { line: 0, reason: "vertex names must be distinct".into() });
    }
    let mut pairs = Vec::new();
    for (line, a, b) in &edges {
        let err = |reason: String| FormatError::GraphSyntax { line: *line, reason };
        let lookup = |v: &str| index.get(v).copied().ok_or_else(|| err(format!("unknown vertex `{v}`")));
        let pair = match (lookup(a)?, lookup(b)?) {
            ((true, e), (false, o)) | ((false, o), (true, e)) => (e, o),
            _ => return Err(err(format!("edge {a} {b} does not join an even and an odd vertex"))),
        };
        pairs.push(pair);
    }
    let graph = BipartiteGraph::new(even.clone(), odd.clone(), pairs)?;
    let mut values = vec![Scalar::one(); graph.num_vertices()];
    for (line, v, value) in &spins {
        let err = |reason: String| FormatError::GraphSyntax { line: *line, reason };
        let &(is_even, i) = index.get(v.as_str()).ok_or_else(|| err(format!("unknown vertex `{v}`")))?;
        let id = if is_even { graph.even_id(i) } else { graph.odd_id(i) };
        values[id as usize] = parse_spin(value).ok_or_else(|| err(format!("bad spin value `{value}`")))?;
    }
    let spin = SpinFunction::new(&graph, values)?;
    Ok((graph, spin))
}

#[derive(Deserialize)]
struct BindingSpec {
    color: String,
    coefficients: Vec<String>,
}

/// Parses a color written as `0+`, `0-` or a positive integer.
pub fn parse_color(text: &str) -> Option<Color> {
    match text.trim() {
        "0+" => Some(Color::ZeroPlus),
        "0-" => Some(Color::ZeroMinus),
        t => t.parse::<u32>().ok().filter(|&k| k > 0).map(Color::Positive),
    }
}

/// Reads `{"x": {"color": "2", "coefficients": ["1", "-1/2"]}}`: each
/// variable is the given combination of the relative-commutant basis at its
/// color.
pub fn parse_bindings(json: &str, basis_at: impl Fn(Color) -> Vec<ModelElement>) -> Result<BTreeMap<String, ModelElement>, FormatError> {
    let specs: BTreeMap<String, BindingSpec> = serde_json::from_str(json)?;
    let mut out = BTreeMap::new();
    for (name, spec) in specs {
        let color = parse_color(&spec.color).ok_or_else(|| FormatError::Bindings(format!("`{name}` has bad color `{}`", spec.color)))?;
        let basis = basis_at(color);
        if spec.coefficients.len() != basis.len() {
            return Err(FormatError::Bindings(format!(
                "`{name}` has {} coefficients but the basis at color {color} has {} elements",
                spec.coefficients.len(),
                basis.len()
            )));
        }
        let coeffs: Vec<Rational> = spec
            .coefficients
            .iter()
            .map(|c| parse_rational(c).ok_or_else(|| FormatError::Bindings(format!("`{name}`: bad rational `{c}`"))))
            .collect::<Result<_, _>>()?;
        out.insert(name, combination(&basis, &coeffs)?);
    }
    Ok(out)
}
