//! One-dimensional rules and streamed tensor-product sums.

use rayon::prelude::*;

use crate::error::{BuresError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    GaussLegendre,
    CompositeSimpson,
}

/// Nodes and weights on `[-1, 1]`, by Newton iteration on `P_n`.
pub fn gauss_legendre(points: usize) -> (Vec<f64>, Vec<f64>) {
    let n = points;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi initial guess for the i-th largest root.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
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
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Composite Simpson weights on `points` equispaced nodes of `[0, 1]`. An
/// odd interval count closes with Simpson's 3/8 panel; two points fall
/// back to the trapezoid rule.
fn simpson_unit(points: usize) -> (Vec<f64>, Vec<f64>) {
    let intervals = points - 1;
    let h = 1.0 / intervals as f64;
    let nodes: Vec<f64> = (0..points).map(|i| i as f64 * h).collect();
    let mut w = vec![0.0; points];
    if intervals == 1 {
        w[0] = 0.5 * h;
        w[1] = 0.5 * h;
        return (nodes, w);
    }
    let simpson_intervals = if intervals.is_multiple_of(2) {
        intervals
    } else {
        intervals - 3
    };
    for start in (0..simpson_intervals).step_by(2) {
        w[start] += h / 3.0;
        w[start + 1] += 4.0 * h / 3.0;
        w[start + 2] += h / 3.0;
    }
    if simpson_intervals != intervals {
        let s = simpson_intervals;
        w[s] += 3.0 * h / 8.0;
        w[s + 1] += 9.0 * h / 8.0;
        w[s + 2] += 9.0 * h / 8.0;
        w[s + 3] += 3.0 * h / 8.0;
    }
    (nodes, w)
}

/// Nodes and weights of `rule` mapped to `[lower, upper]`.
pub fn rule_on_interval(rule: Rule, points: usize, lower: f64, upper: f64) -> Result<Axis> {
    if points < 2 {
        return Err(BuresError::InvalidSpec(format!(
            "points per axis must be at least 2, got {points}"
        )));
    }
    let width = upper - lower;
    let (nodes, weights) = match rule {
        Rule::GaussLegendre => {
            let (x, w) = gauss_legendre(points);
            (
                x.iter().map(|&t| lower + 0.5 * width * (t + 1.0)).collect(),
                w.iter().map(|&v| 0.5 * width * v).collect(),
            )
        }
        Rule::CompositeSimpson => {
            let (x, w) = simpson_unit(points);
            (
                x.iter().map(|&t| lower + width * t).collect(),
                w.iter().map(|&v| width * v).collect(),
            )
        }
    };
    Ok(Axis { nodes, weights })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Axis {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Axis {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        let mut acc = NeumaierSum::default();
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            acc.add(w * f(x));
        }
        acc.value()
    }
}

/// Compensated summation.
#[derive(Clone, Copy, Debug, Default)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Nodes per parallel work unit. Fixed, so the reduction order (and hence
/// the result bits) does not depend on the worker count.
const BLOCK: usize = 4096;

/// Tensor product of 1-D rules, evaluated node by node without
/// materializing the grid.
#[derive(Clone, Debug)]
pub struct TensorGrid {
    axes: Vec<Axis>,
}

impl TensorGrid {
    pub fn new(axes: Vec<Axis>) -> Self {
        Self { axes }
    }

    pub fn dimension(&self) -> usize {
        self.axes.len()
    }

    pub fn node_count(&self) -> usize {
        self.axes.iter().map(Axis::len).product()
    }

    /// `Σ w_node · f(node)`. Each block of nodes is summed sequentially;
    /// block sums are then combined in index order.
    pub fn sum<F>(&self, f: F) -> f64
    where
        F: Fn(&[f64]) -> f64 + Sync,
    {
        let total = self.node_count();
        let blocks = total.div_ceil(BLOCK);
        let partials: Vec<f64> = (0..blocks)
            .into_par_iter()
            .map(|b| {
                let start = b * BLOCK;
                let end = (start + BLOCK).min(total);
                let mut point = vec![0.0; self.axes.len()];
                let mut acc = NeumaierSum::default();
                for index in start..end {
                    let mut rem = index;
                    let mut w = 1.0;
                    // Last axis varies fastest.
                    for (d, axis) in self.axes.iter().enumerate().rev() {
                        let i = rem % axis.len();
                        rem /= axis.len();
                        point[d] = axis.nodes[i];
                        w *= axis.weights[i];
                    }
                    if w != 0.0 {
                        acc.add(w * f(&point));
                    }
                }
                acc.value()
            })
            .collect();
        let mut acc = NeumaierSum::default();
        for p in partials {
            acc.add(p);
        }
        acc.value()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        for n in [2, 3, 5, 12, 32, 64] {
            let axis = rule_on_interval(Rule::GaussLegendre, n, -1.0, 1.0).unwrap();
            let total: f64 = axis.weights.iter().sum();
            assert!((total - 2.0).abs() < 1e-14, "n={n}");
            // Degree 2n-1 is exact.
            let deg = 2 * n - 2;
            let v = axis.integrate(|x| x.powi(deg as i32));
            assert!((v - 2.0 / (deg as f64 + 1.0)).abs() < 1e-13, "n={n}");
        }
    }

    #[test]
    fn gauss_legendre_known_nodes() {
        let (x, w) = gauss_legendre(2);
        assert!((x[1] - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        assert!((w[0] - 1.0).abs() < 1e-15);
        let (x, w) = gauss_legendre(3);
        assert_eq!(x[1], 0.0);
        assert!((w[1] - 8.0 / 9.0).abs() < 1e-15);
        assert!((x[2] - 0.6f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn simpson_weights() {
        for points in [2, 3, 4, 5, 8, 33] {
            let axis = rule_on_interval(Rule::CompositeSimpson, points, 0.0, 2.0).unwrap();
            let total: f64 = axis.weights.iter().sum();
            assert!((total - 2.0).abs() < 1e-14);
            if points >= 3 {
                // Exact for cubics when every panel is Simpson or 3/8.
                let v = axis.integrate(|x| x * x * x);
                assert!((v - 4.0).abs() < 1e-13, "points={points}");
            }
        }
        let axis = rule_on_interval(Rule::CompositeSimpson, 65, 0.0, PI).unwrap();
        assert!((axis.integrate(f64::sin) - 2.0).abs() < 1e-7);
    }

    #[test]
    fn rejects_single_point() {
        assert!(rule_on_interval(Rule::GaussLegendre, 1, 0.0, 1.0).is_err());
    }

    #[test]
    fn tensor_sum_factorizes() {
        let ax = rule_on_interval(Rule::GaussLegendre, 7, 0.0, 1.0).unwrap();
        let ay = rule_on_interval(Rule::GaussLegendre, 5, 0.0, PI).unwrap();
        let az = rule_on_interval(Rule::CompositeSimpson, 9, -1.0, 1.0).unwrap();
        let grid = TensorGrid::new(vec![ax.clone(), ay.clone(), az.clone()]);
        assert_eq!(grid.node_count(), 7 * 5 * 9);
        let full = grid.sum(|p| p[0].exp() * p[1].sin() * (1.0 + p[2] * p[2]));
        let fact = ax.integrate(f64::exp) * ay.integrate(f64::sin) * az.integrate(|z| 1.0 + z * z);
        assert!((full - fact).abs() < 1e-13);
    }

    #[test]
    fn tensor_sum_is_thread_count_independent() {
        let axes: Vec<Axis> = (0..4)
            .map(|_| rule_on_interval(Rule::GaussLegendre, 11, 0.0, 1.0).unwrap())
            .collect();
        let grid = TensorGrid::new(axes);
        let f = |p: &[f64]| (p[0] * 3.1 + p[1]).sin() * (p[2] - p[3]).exp();
        let one = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| grid.sum(f));
        let four = rayon::ThreadPoolBuilder::new()
            .num_threads(4)
            .build()
            .unwrap()
            .install(|| grid.sum(f));
        assert_eq!(one.to_bits(), four.to_bits());
    }
}
