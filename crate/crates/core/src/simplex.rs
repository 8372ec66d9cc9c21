//! Dense phase-one simplex for convex-combination feasibility.
//!
//! Decides whether `target = Σ w_j p_j` with `w >= 0`, `Σ w_j = 1`. Pivoting uses
//! Bland's rule, so the routine terminates on degenerate inputs. When the target
//! is not a convex combination, the optimal phase-one multipliers give a hyperplane
//! `c · p + c0 = 0` with `c · p_j + c0 <= 0` for all `j` and `c · target + c0 > 0`.

use alloc::vec;
use alloc::vec::Vec;

#[derive(Debug, Clone, PartialEq)]
pub enum Feasibility {
    /// Weights of a convex combination.
    Feasible(Vec<f64>),
    /// Separating hyperplane `(c, c0)`.
    Infeasible { direction: Vec<f64>, offset: f64 },
}

const PIVOT_EPS: f64 = 1e-12;

/// Solves the feasibility problem for the columns `points` (each of length `d`).
pub fn convex_combination(points: &[&[f64]], target: &[f64]) -> Feasibility {
    let d = target.len();
    let m = d + 1;
    let n = points.len();
    let width = n + m + 1;
    let rhs = width - 1;
    let mut t = vec![0.0; m * width];
    let mut sign = vec![1.0; m];
    for k in 0..m {
        let b = if k < d { target[k] } else { 1.0 };
        sign[k] = if b < 0.0 { -1.0 } else { 1.0 };
        let row = &mut t[k * width..(k + 1) * width];
        for (j, p) in points.iter().enumerate() {
            row[j] = sign[k] * if k < d { p[k] } else { 1.0 };
        }
        row[n + k] = 1.0;
        row[rhs] = sign[k] * b;
    }
    // Reduced costs of the phase-one objective Σ artificials.
    let mut cost = vec![0.0; width];
    for j in 0..n {
        cost[j] = -(0..m).map(|k| t[k * width + j]).sum::<f64>();
    }
    cost[rhs] = -(0..m).map(|k| t[k * width + rhs]).sum::<f64>();
    let mut basis: Vec<usize> = (n..n + m).collect();
    let scale = 1.0 + target.iter().map(|v| v.abs()).fold(0.0, f64::max);

    let mut iterations = 0usize;
    loop {
        iterations += 1;
        let Some(enter) = (0..n + m).find(|&j| cost[j] < -PIVOT_EPS * scale) else { break };
        let mut leave: Option<usize> = None;
        let mut best = f64::INFINITY;
        for k in 0..m {
            let a = t[k * width + enter];
            if a > PIVOT_EPS {
                let ratio = t[k * width + rhs] / a;
                let better = match leave {
                    None => true,
                    Some(l) => ratio < best || (ratio == best && basis[k] < basis[l]),
                };
                if better {
                    best = ratio;
                    leave = Some(k);
                }
            }
        }
        let Some(row) = leave else { break };
        pivot(&mut t, &mut cost, width, m, row, enter);
        basis[row] = enter;
        if iterations > 50 * (n + m) + 1000 {
            break;
        }
    }

    let residual = -cost[rhs];
    if residual <= 1e-10 * scale {
        let mut w = vec![0.0; n];
        for (k, &b) in basis.iter().enumerate() {
            if b < n {
                w[b] = t[k * width + rhs];
            }
        }
        return Feasibility::Feasible(w);
    }
    // Phase-one multipliers: reduced cost of artificial k is 1 − y_k.
    let y: Vec<f64> = (0..m).map(|k| sign[k] * (1.0 - cost[n + k])).collect();
    Feasibility::Infeasible { direction: y[..d].to_vec(), offset: y[d] }
}

fn pivot(t: &mut [f64], cost: &mut [f64], width: usize, m: usize, row: usize, col: usize) {
    let p = t[row * width + col];
    for v in &mut t[row * width..(row + 1) * width] {
        *v /= p;
    }
    for k in 0..m {
        if k == row {
            continue;
        }
        let f = t[k * width + col];
        if f != 0.0 {
            for j in 0..width {
                t[k * width + j] -= f * t[row * width + j];
            }
        }
    }
    let f = cost[col];
    if f != 0.0 {
        for j in 0..width {
            cost[j] -= f * t[row * width + j];
        }
    }
}
