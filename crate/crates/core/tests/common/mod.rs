//! Reference computations shared by the integration test targets.
#![allow(dead_code)]

use gsa_core::models::ishigami;

/// Main and total effects of the Ishigami function by brute-force midpoint
/// quadrature of the conditional moments on a `g^3` tensor grid.
pub fn ishigami_quadrature(a: f64, b: f64, g: usize) -> ([f64; 3], [f64; 3]) {
    let pi = std::f64::consts::PI;
    let nodes: Vec<f64> = (0..g)
        .map(|i| -pi + 2.0 * pi * (i as f64 + 0.5) / g as f64)
        .collect();
    let f = |x: [f64; 3]| ishigami(x[0], x[1], x[2], a, b);
    let point = |i: usize, fixed: f64, j: f64, k: f64| -> [f64; 3] {
        match i {
            0 => [fixed, j, k],
            1 => [j, fixed, k],
            _ => [j, k, fixed],
        }
    };
    let (mut m1, mut m2) = (0.0, 0.0);
    for &x in &nodes {
        for &y in &nodes {
            for &z in &nodes {
                let v = f([x, y, z]);
                m1 += v;
                m2 += v * v;
            }
        }
    }
    let cells = (g * g * g) as f64;
    let mean = m1 / cells;
    let var = m2 / cells - mean * mean;
    let mut main = [0.0; 3];
    let mut total = [0.0; 3];
    for i in 0..3 {
        // Var over x_i of E[Y | x_i]
        let mut acc = 0.0;
        for &xi in &nodes {
            let mut s = 0.0;
            for &u in &nodes {
                for &w in &nodes {
                    s += f(point(i, xi, u, w));
                }
            }
            let c = s / (g * g) as f64 - mean;
            acc += c * c;
        }
        main[i] = acc / g as f64 / var;
        // E over the others of Var over x_i
        let mut acc = 0.0;
        for &u in &nodes {
            for &w in &nodes {
                let (mut s1, mut s2) = (0.0, 0.0);
                for &xi in &nodes {
                    let v = f(point(i, xi, u, w));
                    s1 += v;
                    s2 += v * v;
                }
                let m = s1 / g as f64;
                acc += s2 / g as f64 - m * m;
            }
        }
        total[i] = acc / (g * g) as f64 / var;
    }
    (main, total)
}
