//! A small expression language for composites of the generating tangles,
//! evaluated in either model.
//!
//! ```text
//! expr  := ident | "unit" "(" color ")" | "jones" "(" color ")"
//!        | fn "(" expr { "," expr } ")"
//! fn    := "incl" | "mult" | "condE" ["[0-]"] ["/d"] | "condE1" ["/d"]
//! color := "0+" | "0-" | integer
//! ```
//!
//! `condE` and `condE1` are the raw tangle maps; the `/d` forms divide by
//! the modulus. `condE[0-]` selects the `0-` target from color 1.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::model::{ModelElement, SubfactorModel};
use crate::planar::{Color, GraphPlanarAlgebra, PAElement};
use crate::scalar::Scalar;

/// The generating tangle maps of a planar algebra, as used by the
/// expression evaluator and the verification suites.
pub trait TangleModel {
    type Element: Clone + PartialEq + fmt::Debug;

    fn color_of(&self, x: &Self::Element) -> Color;
    fn unit(&self, color: Color) -> Self::Element;
    fn include(&self, x: &Self::Element) -> Result<Self::Element>;
    fn multiply(&self, x: &Self::Element, y: &Self::Element) -> Result<Self::Element>;
    fn adjoint(&self, x: &Self::Element) -> Self::Element;
    fn cond_exp(&self, x: &Self::Element, minus: bool) -> Result<Self::Element>;
    fn cond_exp_prime(&self, x: &Self::Element) -> Result<Self::Element>;
    fn jones_element(&self, color: Color) -> Result<Self::Element>;
    fn scale(&self, x: &Self::Element, c: &Scalar) -> Self::Element;
    fn trace(&self, x: &Self::Element) -> Result<Scalar>;
    fn delta(&self) -> Result<Scalar>;
}

impl TangleModel for GraphPlanarAlgebra {
    type Element = PAElement;

    fn color_of(&self, x: &PAElement) -> Color {
        x.color()
    }
    fn unit(&self, color: Color) -> PAElement {
        GraphPlanarAlgebra::unit(self, color)
    }
    fn include(&self, x: &PAElement) -> Result<PAElement> {
        GraphPlanarAlgebra::include(self, x)
    }
    fn multiply(&self, x: &PAElement, y: &PAElement) -> Result<PAElement> {
        GraphPlanarAlgebra::multiply(self, x, y)
    }
    fn adjoint(&self, x: &PAElement) -> PAElement {
        GraphPlanarAlgebra::adjoint(self, x)
    }
    fn cond_exp(&self, x: &PAElement, minus: bool) -> Result<PAElement> {
        GraphPlanarAlgebra::cond_exp(self, x, minus)
    }
    fn cond_exp_prime(&self, x: &PAElement) -> Result<PAElement> {
        GraphPlanarAlgebra::cond_exp_prime(self, x)
    }
    fn jones_element(&self, color: Color) -> Result<PAElement> {
        GraphPlanarAlgebra::jones_element(self, color)
    }
    fn scale(&self, x: &PAElement, c: &Scalar) -> PAElement {
        x.scaled(c)
    }
    fn trace(&self, x: &PAElement) -> Result<Scalar> {
        GraphPlanarAlgebra::trace(self, x)
    }
    fn delta(&self) -> Result<Scalar> {
        GraphPlanarAlgebra::delta(self)
    }
}

impl TangleModel for SubfactorModel {
    type Element = ModelElement;

    fn color_of(&self, x: &ModelElement) -> Color {
        x.color()
    }
    fn unit(&self, color: Color) -> ModelElement {
        SubfactorModel::unit(self, color)
    }
    fn include(&self, x: &ModelElement) -> Result<ModelElement> {
        SubfactorModel::include(self, x)
    }
    fn multiply(&self, x: &ModelElement, y: &ModelElement) -> Result<ModelElement> {
        SubfactorModel::multiply(self, x, y)
    }
    fn adjoint(&self, x: &ModelElement) -> ModelElement {
        self.adjoint_element(x)
    }
    fn cond_exp(&self, x: &ModelElement, minus: bool) -> Result<ModelElement> {
        SubfactorModel::cond_exp(self, x, minus)
    }
    fn cond_exp_prime(&self, x: &ModelElement) -> Result<ModelElement> {
        SubfactorModel::cond_exp_prime(self, x)
    }
    fn jones_element(&self, color: Color) -> Result<ModelElement> {
        SubfactorModel::jones_element(self, color)
    }
    fn scale(&self, x: &ModelElement, c: &Scalar) -> ModelElement {
        x.scaled(c)
    }
    fn trace(&self, x: &ModelElement) -> Result<Scalar> {
        Ok(self.trace_element(x))
    }
    fn delta(&self) -> Result<Scalar> {
        Ok(SubfactorModel::delta(self))
    }
}

/// A node of a tangle expression together with its output color.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TangleExpr {
    pub kind: ExprKind,
    pub color: Color,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExprKind {
    Unit,
    Jones,
    Var(String),
    Incl(Box<TangleExpr>),
    Mult(Box<TangleExpr>, Box<TangleExpr>),
    CondE { inner: Box<TangleExpr>, minus: bool, normalized: bool },
    CondEPrime { inner: Box<TangleExpr>, normalized: bool },
}

/// Parse and color errors, with byte offsets into the source text.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ExprError {
    #[error("syntax error at {position}: expected {}, found {found}", expected.join(" or "))]
    Syntax { position: usize, expected: Vec<String>, found: String },
    #[error("color mismatch at {position} in {node}: expected {expected}, got {got}")]
    ColorMismatch { position: usize, node: String, expected: Color, got: Color },
    #[error("invalid color {color} for {node} at {position}")]
    BadColor { position: usize, node: String, color: Color },
    #[error("unknown variable `{name}` at {position}")]
    UnknownVariable { position: usize, name: String },
}

impl TangleExpr {
    pub fn unit(color: Color) -> TangleExpr {
        TangleExpr { kind: ExprKind::Unit, color }
    }

    pub fn jones(color: Color) -> Result<TangleExpr> {
        if color.half_len() < 2 {
            return Err(Error::BadColor(color));
        }
        Ok(TangleExpr { kind: ExprKind::Jones, color })
    }

    pub fn var(name: impl Into<String>, color: Color) -> TangleExpr {
        TangleExpr { kind: ExprKind::Var(name.into()), color }
    }

    pub fn incl(inner: TangleExpr) -> TangleExpr {
        TangleExpr { color: inner.color.raised(), kind: ExprKind::Incl(Box::new(inner)) }
    }

    pub fn mult(left: TangleExpr, right: TangleExpr) -> Result<TangleExpr> {
        if left.color != right.color {
            return Err(Error::ColorMismatch { expected: left.color, got: right.color });
        }
        Ok(TangleExpr { color: left.color, kind: ExprKind::Mult(Box::new(left), Box::new(right)) })
    }

    pub fn cond_exp(inner: TangleExpr, minus: bool, normalized: bool) -> Result<TangleExpr> {
        if minus && inner.color != Color::Positive(1) {
            return Err(Error::BadColor(inner.color));
        }
        let color = inner.color.lowered(minus).ok_or(Error::BadColor(inner.color))?;
        Ok(TangleExpr { color, kind: ExprKind::CondE { inner: Box::new(inner), minus, normalized } })
    }

    pub fn cond_exp_prime(inner: TangleExpr, normalized: bool) -> Result<TangleExpr> {
        if inner.color.is_zero() {
            return Err(Error::BadColor(inner.color));
        }
        Ok(TangleExpr { color: inner.color, kind: ExprKind::CondEPrime { inner: Box::new(inner), normalized } })
    }

    /// Nesting depth; leaves have depth 0.
    pub fn depth(&self) -> usize {
        match &self.kind {
            ExprKind::Unit | ExprKind::Jones | ExprKind::Var(_) => 0,
            ExprKind::Incl(x) | ExprKind::CondE { inner: x, .. } | ExprKind::CondEPrime { inner: x, .. } => 1 + x.depth(),
            ExprKind::Mult(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    pub fn variables(&self) -> Vec<(String, Color)> {
        let mut out = Vec::new();
        self.collect_variables(&mut out);
        out.sort();
        out.dedup();
        out
    }

    fn collect_variables(&self, out: &mut Vec<(String, Color)>) {
        match &self.kind {
            ExprKind::Var(name) => out.push((name.clone(), self.color)),
            ExprKind::Unit | ExprKind::Jones => {}
            ExprKind::Incl(x) | ExprKind::CondE { inner: x, .. } | ExprKind::CondEPrime { inner: x, .. } => x.collect_variables(out),
            ExprKind::Mult(a, b) => {
                a.collect_variables(out);
                b.collect_variables(out);
            }
        }
    }
}

impl fmt::Display for TangleExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let suffix = |normalized: bool| if normalized { "/d" } else { "" };
        match &self.kind {
            ExprKind::Unit => write!(f, "unit({})", self.color),
            ExprKind::Jones => write!(f, "jones({})", self.color),
            ExprKind::Var(name) => f.write_str(name),
            ExprKind::Incl(x) => write!(f, "incl({x})"),
            ExprKind::Mult(a, b) => write!(f, "mult({a}, {b})"),
            ExprKind::CondE { inner, minus, normalized } => {
                write!(f, "condE{}{}({inner})", if *minus { "[0-]" } else { "" }, suffix(*normalized))
            }
            ExprKind::CondEPrime { inner, normalized } => write!(f, "condE1{}({inner})", suffix(*normalized)),
        }
    }
}

/// Parses an expression; `variables` gives the color of every free name.
pub fn parse(text: &str, variables: &BTreeMap<String, Color>) -> core::result::Result<TangleExpr, ExprError> {
    let mut p = Parser { text, pos: 0, variables };
    let expr = p.expr()?;
    p.skip_ws();
    if p.pos < text.len() {
        return Err(p.syntax(&["end of input"]));
    }
    Ok(expr)
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
    variables: &'a BTreeMap<String, Color>,
}

impl Parser<'_> {
    fn rest(&self) -> &str {
        &self.text[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.text.len() - trimmed.len();
    }

    fn syntax(&self, expected: &[&str]) -> ExprError {
        let found = match self.rest().chars().next() {
            Some(c) => alloc::format!("`{c}`"),
            None => "end of input".to_string(),
        };
        ExprError::Syntax { position: self.pos, expected: expected.iter().map(|s| s.to_string()).collect(), found }
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> core::result::Result<(), ExprError> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.syntax(&[&alloc::format!("`{token}`")]))
        }
    }

    fn ident(&mut self) -> Option<(usize, &str)> {
        self.skip_ws();
        let start = self.pos;
        let rest = self.rest();
        let mut chars = rest.char_indices();
        match chars.next() {
            Some((_, c)) if c.is_ascii_alphabetic() || c == '_' => {}
            _ => return None,
        }
        let len = chars.find(|(_, c)| !(c.is_ascii_alphanumeric() || *c == '_')).map(|(i, _)| i).unwrap_or(rest.len());
        self.pos += len;
        Some((start, &self.text[start..start + len]))
    }

    fn color(&mut self) -> core::result::Result<Color, ExprError> {
        self.skip_ws();
        let start = self.pos;
        let len = self.rest().find(|c: char| !(c.is_ascii_digit() || c == '+' || c == '-')).unwrap_or(self.rest().len());
        let token = &self.text[start..start + len];
        match token.parse::<Color>() {
            Ok(c) if !token.is_empty() => {
                self.pos += len;
                Ok(c)
            }
            _ => Err(self.syntax(&["`0+`", "`0-`", "a color number"])),
        }
    }

    fn expr(&mut self) -> core::result::Result<TangleExpr, ExprError> {
        let Some((start, name)) = self.ident() else {
            return Err(self.syntax(&["`unit`", "`jones`", "`incl`", "`mult`", "`condE`", "`condE1`", "a variable"]));
        };
        let name = name.to_string();
        let color_err = |node: &str, color: Color| ExprError::BadColor { position: start, node: node.to_string(), color };
        match name.as_str() {
            "unit" | "jones" => {
                self.expect("(")?;
                let c = self.color()?;
                self.expect(")")?;
                if name == "unit" {
                    Ok(TangleExpr::unit(c))
                } else {
                    TangleExpr::jones(c).map_err(|_| color_err("jones", c))
                }
            }
            "incl" => {
                let inner = self.single_arg()?;
                Ok(TangleExpr::incl(inner))
            }
            "mult" => {
                self.expect("(")?;
                let left = self.expr()?;
                self.expect(",")?;
                let right = self.expr()?;
                self.expect(")")?;
                if left.color != right.color {
                    return Err(ExprError::ColorMismatch { position: start, node: "mult".into(), expected: left.color, got: right.color });
                }
                Ok(TangleExpr::mult(left, right).expect("colors checked"))
            }
            "condE" => {
                let minus = self.eat("[0-]");
                let normalized = self.eat("/d");
                let inner = self.single_arg()?;
                let c = inner.color;
                TangleExpr::cond_exp(inner, minus, normalized).map_err(|_| color_err("condE", c))
            }
            "condE1" => {
                let normalized = self.eat("/d");
                let inner = self.single_arg()?;
                let c = inner.color;
                TangleExpr::cond_exp_prime(inner, normalized).map_err(|_| color_err("condE1", c))
            }
            _ => match self.variables.get(&name) {
                Some(&c) => Ok(TangleExpr::var(name, c)),
                None => Err(ExprError::UnknownVariable { position: start, name }),
            },
        }
    }

    fn single_arg(&mut self) -> core::result::Result<TangleExpr, ExprError> {
        self.expect("(")?;
        let inner = self.expr()?;
        self.expect(")")?;
        Ok(inner)
    }
}

/// Bottom-up evaluation in a model.
pub fn evaluate<M: TangleModel>(expr: &TangleExpr, model: &M, bindings: &BTreeMap<String, M::Element>) -> Result<M::Element> {
    let normalize = |x: M::Element, normalized: bool| -> Result<M::Element> {
        if normalized {
            let inv = model.delta()?.inv().ok_or(Error::NoModulus)?;
            Ok(model.scale(&x, &inv))
        } else {
            Ok(x)
        }
    };
    match &expr.kind {
        ExprKind::Unit => Ok(model.unit(expr.color)),
        ExprKind::Jones => model.jones_element(expr.color),
        ExprKind::Var(name) => {
            let x = bindings.get(name).ok_or_else(|| Error::Unbound(name.clone()))?;
            let got = model.color_of(x);
            if got != expr.color {
                return Err(Error::ColorMismatch { expected: expr.color, got });
            }
            Ok(x.clone())
        }
        ExprKind::Incl(x) => model.include(&evaluate(x, model, bindings)?),
        ExprKind::Mult(a, b) => model.multiply(&evaluate(a, model, bindings)?, &evaluate(b, model, bindings)?),
        ExprKind::CondE { inner, minus, normalized } => normalize(model.cond_exp(&evaluate(inner, model, bindings)?, *minus)?, *normalized),
        ExprKind::CondEPrime { inner, normalized } => normalize(model.cond_exp_prime(&evaluate(inner, model, bindings)?)?, *normalized),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::builtin_pair;
    use proptest::prelude::*;

    fn vars() -> BTreeMap<String, Color> {
        [("x", 2), ("y", 3), ("z", 1)].into_iter().map(|(n, c)| (n.to_string(), Color::Positive(c))).collect()
    }

    #[test]
    fn parses_and_colors() {
        let v = vars();
        let e = parse("mult(x, x)", &v).unwrap();
        assert_eq!(e.color, Color::Positive(2));
        assert!(matches!(e.kind, ExprKind::Mult(..)));
        assert_eq!(parse("condE(incl(x))", &v).unwrap().color, Color::Positive(2));
        assert_eq!(parse("condE[0-]/d(z)", &v).unwrap().color, Color::ZeroMinus);
        assert_eq!(parse(" condE( unit(1) ) ", &v).unwrap().color, Color::ZeroPlus);
        assert_eq!(parse("incl(unit(0-))", &v).unwrap().color, Color::Positive(1));
        assert_eq!(parse("jones(4)", &v).unwrap().depth(), 0);
        assert_eq!(parse("condE1/d(mult(y, incl(x)))", &v).unwrap().depth(), 3);
    }

    #[test]
    fn reports_errors_with_positions() {
        let v = vars();
        assert_eq!(
            parse("mult(x, y)", &v),
            Err(ExprError::ColorMismatch { position: 0, node: "mult".into(), expected: Color::Positive(2), got: Color::Positive(3) })
        );
        match parse("incl(x", &v) {
            Err(ExprError::Syntax { position: 6, expected, found }) => {
                assert_eq!(expected, alloc::vec!["`)`".to_string()]);
                assert_eq!(found, "end of input");
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse("incl(w)", &v), Err(ExprError::UnknownVariable { position: 5, .. })));
        assert!(matches!(parse("jones(1)", &v), Err(ExprError::BadColor { .. })));
        assert!(matches!(parse("condE(unit(0+))", &v), Err(ExprError::BadColor { .. })));
        assert!(matches!(parse("condE[0-](x)", &v), Err(ExprError::BadColor { .. })));
        assert!(matches!(parse("unit(q)", &v), Err(ExprError::Syntax { position: 5, .. })));
        assert!(matches!(parse("x y", &v), Err(ExprError::Syntax { position: 2, .. })));
    }

    #[test]
    fn units_and_jones_in_both_models() {
        let cs = builtin_pair("S3:S2", 100).unwrap().into_coset_space();
        let model = SubfactorModel::new(cs);
        let pa = GraphPlanarAlgebra::star(3);
        let none_m = BTreeMap::new();
        let none_l = BTreeMap::new();
        for c in [Color::ZeroPlus, Color::ZeroMinus, Color::Positive(1), Color::Positive(3)] {
            let e = TangleExpr::unit(c);
            assert_eq!(evaluate(&e, &model, &none_m).unwrap(), model.unit(c));
            assert_eq!(evaluate(&e, &pa, &none_l).unwrap(), pa.unit(c));
        }
        let j = parse("condE/d(incl(unit(1)))", &BTreeMap::new()).unwrap();
        assert_eq!(evaluate(&j, &pa, &none_l).unwrap(), pa.unit(Color::Positive(1)));
        assert_eq!(evaluate(&j, &model, &none_m).unwrap(), model.unit(Color::Positive(1)));
        let x = TangleExpr::var("x", Color::Positive(2));
        assert!(matches!(evaluate(&x, &pa, &none_l), Err(Error::Unbound(_))));
        let wrong: BTreeMap<String, PAElement> = [("x".to_string(), pa.unit(Color::Positive(3)))].into_iter().collect();
        assert!(matches!(evaluate(&x, &pa, &wrong), Err(Error::ColorMismatch { .. })));
    }

    #[test]
    fn composite_equals_composed_evaluations() {
        let pa = GraphPlanarAlgebra::star(3);
        let x = pa.jones_element(Color::Positive(2)).unwrap();
        let b: BTreeMap<String, PAElement> = [("x".to_string(), x.clone())].into_iter().collect();
        let e = parse("mult(condE1(incl(x)), jones(3))", &vars()).unwrap();
        let direct =
            pa.multiply(&pa.cond_exp_prime(&pa.include(&x).unwrap()).unwrap(), &pa.jones_element(Color::Positive(3)).unwrap()).unwrap();
        assert_eq!(evaluate(&e, &pa, &b).unwrap(), direct);
    }

    fn arb_expr() -> impl Strategy<Value = TangleExpr> {
        let leaf = prop_oneof![
            (0u32..5).prop_map(|c| TangleExpr::unit(Color::new(c))),
            Just(TangleExpr::unit(Color::ZeroMinus)),
            (2u32..5).prop_map(|c| TangleExpr::jones(Color::Positive(c)).unwrap()),
            (1u32..4).prop_map(|c| TangleExpr::var(["z", "x", "y"][c as usize - 1], Color::Positive(c))),
        ];
        leaf.prop_recursive(4, 24, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(TangleExpr::incl),
                (inner.clone(), any::<bool>(), any::<bool>()).prop_map(|(x, m, d)| {
                    let minus = m && x.color == Color::Positive(1);
                    TangleExpr::cond_exp(x.clone(), minus, d).unwrap_or(x)
                }),
                (inner.clone(), any::<bool>()).prop_map(|(x, d)| TangleExpr::cond_exp_prime(x.clone(), d).unwrap_or(x)),
                (inner.clone(), inner).prop_map(|(a, b)| TangleExpr::mult(a.clone(), b.clone()).unwrap_or(a)),
            ]
        })
    }

    proptest! {
        #[test]
        fn print_then_parse_round_trips(e in arb_expr()) {
            let text = alloc::format!("{e}");
            prop_assert_eq!(parse(&text, &vars()), Ok(e));
        }
    }
}
