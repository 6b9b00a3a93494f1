//! Gauss–Legendre rules, single-panel and composite.

use std::f64::consts::PI;

/// Nodes and weights of an n-point Gauss–Legendre rule on [-1, 1], nodes
/// ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi initial guess, then Newton on P_n.
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Composite rule: `panels` equal panels on `[a, b]`, each carrying an
/// `nodes_per_panel`-point Gauss–Legendre rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadratureSpec {
    pub nodes_per_panel: usize,
    pub panels: usize,
}

impl QuadratureSpec {
    pub const DEFAULT_NODES: usize = 32;

    pub fn new(nodes_per_panel: usize, panels: usize) -> Self {
        Self {
            nodes_per_panel: nodes_per_panel.max(1),
            panels: panels.max(1),
        }
    }

    /// Panel count giving at least `per_period` nodes per period of an
    /// oscillation with angular frequency `omega` over an interval of length
    /// `length`.
    pub fn for_frequency(omega: f64, length: f64, per_period: f64) -> Self {
        let periods = (omega.abs() * length / (2.0 * PI)).max(1.0);
        let nodes = (per_period * periods).ceil();
        let panels = (nodes / Self::DEFAULT_NODES as f64).ceil() as usize;
        Self::new(Self::DEFAULT_NODES, panels.max(1))
    }

    pub fn refined(&self) -> Self {
        Self::new(self.nodes_per_panel, self.panels * 2)
    }

    pub fn rule(&self, a: f64, b: f64) -> CompositeRule {
        let (x, w) = gauss_legendre(self.nodes_per_panel);
        let h = (b - a) / self.panels as f64;
        let total = self.panels * self.nodes_per_panel;
        let mut nodes = Vec::with_capacity(total);
        let mut weights = Vec::with_capacity(total);
        for p in 0..self.panels {
            let lo = a + h * p as f64;
            let mid = lo + 0.5 * h;
            for (xi, wi) in x.iter().zip(&w) {
                nodes.push(mid + 0.5 * h * xi);
                weights.push(0.5 * h * wi);
            }
        }
        CompositeRule { nodes, weights }
    }
}

#[derive(Debug, Clone)]
pub struct CompositeRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl CompositeRule {
    pub fn integrate<T, F>(&self, mut f: F) -> T
    where
        T: std::ops::Add<Output = T> + std::ops::Mul<f64, Output = T> + Default,
        F: FnMut(f64) -> T,
    {
        self.nodes
            .iter()
            .zip(&self.weights)
            .fold(T::default(), |acc, (&x, &w)| acc + f(x) * w)
    }
}
