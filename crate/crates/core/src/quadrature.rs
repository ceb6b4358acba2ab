//! Globally adaptive Gauss–Legendre quadrature.
//!
//! Each panel is integrated with a fixed 20-point Gauss–Legendre rule; its
//! error is estimated by comparing against the same rule applied to both
//! halves. The panel with the largest estimate is bisected until the total
//! estimate meets the tolerance or the subdivision budget runs out.

use std::sync::OnceLock;

use crate::error::{Error, Result};

const ORDER: usize = 20;

/// Integral value with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
    pub subdivisions: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub absolute: f64,
    pub relative: f64,
    pub max_subdivisions: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            absolute: 1e-12,
            relative: 1e-14,
            max_subdivisions: 60,
        }
    }
}

struct Rule {
    nodes: [f64; ORDER],
    weights: [f64; ORDER],
}

fn rule() -> &'static Rule {
    static RULE: OnceLock<Rule> = OnceLock::new();
    RULE.get_or_init(|| legendre_rule(ORDER))
}

// Roots of P_n by Newton iteration from the Chebyshev-like initial guess.
fn legendre_rule(n: usize) -> Rule {
    let mut nodes = [0.0; ORDER];
    let mut weights = [0.0; ORDER];
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        dp = if d != 0.0 { d } else { dp };
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    Rule { nodes, weights }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let n = n as f64;
    (p1, n * (x * p1 - p0) / (x * x - 1.0))
}

fn panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let r = rule();
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    half * r
        .nodes
        .iter()
        .zip(r.weights.iter())
        .map(|(x, w)| w * f(mid + half * x))
        .sum::<f64>()
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn refine<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Panel {
    let m = 0.5 * (a + b);
    let coarse = panel(f, a, b);
    let fine = panel(f, a, m) + panel(f, m, b);
    Panel {
        a,
        b,
        value: fine,
        error: (fine - coarse).abs(),
    }
}

/// Integrates `f` over `[a, b]` (oriented: `b < a` flips the sign).
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: Tolerance) -> Result<Integral> {
    if a == b {
        return Ok(Integral {
            value: 0.0,
            error: 0.0,
            subdivisions: 0,
        });
    }
    if b < a {
        return integrate(f, b, a, tol).map(|i| Integral { value: -i.value, ..i });
    }
    let mut panels = vec![refine(&f, a, b)];
    let mut subdivisions = 0;
    loop {
        let value: f64 = panels.iter().map(|p| p.value).sum();
        let error: f64 = panels.iter().map(|p| p.error).sum();
        let target = tol.absolute.max(tol.relative * value.abs());
        if error <= target {
            return Ok(Integral {
                value,
                error,
                subdivisions,
            });
        }
        if subdivisions >= tol.max_subdivisions {
            return Err(Error::QuadratureNonConvergence {
                estimate: error,
                tolerance: target,
            });
        }
        let worst = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, _)| i)
            .expect("at least one panel");
        let Panel { a, b, .. } = panels.swap_remove(worst);
        let m = 0.5 * (a + b);
        panels.push(refine(&f, a, m));
        panels.push(refine(&f, m, b));
        subdivisions += 1;
    }
}
