//! Seeded random composite tangles and variable bindings.

use std::collections::BTreeMap;

use pln_core::iso::{combination, PhiMap};
use pln_core::model::ModelElement;
use pln_core::planar::Color;
use pln_core::tangle::TangleExpr;
use pln_core::Rational;
use rand::Rng;

/// The variable bound at a positive color.
pub fn variable_name(color: u32) -> String {
    format!("x{color}")
}

/// Generates expression trees whose every subterm has color at most
/// `max_color`.
pub struct ExprGenerator<R> {
    rng: R,
    max_color: u32,
}

impl<R: Rng> ExprGenerator<R> {
    pub fn new(rng: R, max_color: u32) -> Self {
        ExprGenerator { rng, max_color: max_color.max(1) }
    }

    pub fn random_color(&mut self) -> Color {
        match self.rng.random_range(0..self.max_color + 2) {
            0 => Color::ZeroPlus,
            1 => Color::ZeroMinus,
            k => Color::Positive(k - 1),
        }
    }

    fn leaf(&mut self, color: Color) -> TangleExpr {
        let mut options = vec![TangleExpr::unit(color)];
        if let Color::Positive(k) = color {
            options.push(TangleExpr::var(variable_name(k), color));
            options.push(TangleExpr::var(variable_name(k), color));
        }
        if let Ok(j) = TangleExpr::jones(color) {
            options.push(j);
        }
        let i = self.rng.random_range(0..options.len());
        options.swap_remove(i)
    }

    /// A tree of depth at most `depth` with output `color`.
    pub fn expr(&mut self, color: Color, depth: usize) -> TangleExpr {
        if depth == 0 || self.rng.random_bool(0.2) {
            return self.leaf(color);
        }
        let d = depth - 1;
        let k = color.half_len() as u32;
        loop {
            let built = match self.rng.random_range(0..4) {
                0 => TangleExpr::mult(self.expr(color, d), self.expr(color, d)).ok(),
                1 if k >= 1 => {
                    let lower = match k {
                        1 if self.rng.random_bool(0.5) => Color::ZeroMinus,
                        1 => Color::ZeroPlus,
                        _ => Color::Positive(k - 1),
                    };
                    Some(TangleExpr::incl(self.expr(lower, d)))
                }
                2 if k < self.max_color => {
                    let minus = color == Color::ZeroMinus;
                    let normalized = self.rng.random_bool(0.5);
                    TangleExpr::cond_exp(self.expr(Color::Positive(k + 1), d), minus, normalized).ok()
                }
                3 if k >= 1 => TangleExpr::cond_exp_prime(self.expr(color, d), self.rng.random_bool(0.5)).ok(),
                _ => None,
            };
            if let Some(e) = built {
                return e;
            }
        }
    }

    /// A random rational combination of the relative-commutant basis at
    /// each positive color up to the maximum.
    pub fn bindings(&mut self, phi: &PhiMap) -> BTreeMap<String, ModelElement> {
        (1..=self.max_color)
            .map(|k| {
                let basis = phi.model_basis(Color::Positive(k));
                let coeffs: Vec<Rational> =
                    basis.iter().map(|_| Rational::new(self.rng.random_range(-3..=3), self.rng.random_range(1..=2))).collect();
                (variable_name(k), combination(&basis, &coeffs).expect("nonempty basis"))
            })
            .collect()
    }
}
