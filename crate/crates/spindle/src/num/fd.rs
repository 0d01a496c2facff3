//! Finite-difference weights on arbitrary node sets (Fornberg's algorithm).

/// Weights for approximating derivatives of order 0..=m at `x0` from
/// samples at the nodes `x`. Returns a row-major matrix `w` of shape
/// `(m + 1) x x.len()` such that the k-th derivative at `x0` is
/// `sum_i w[k][i] * f(x[i])`.
///
/// Requires `x.len() > m`; nodes must be pairwise distinct.
pub fn fd_weights(x: &[f64], x0: f64, m: usize) -> Vec<Vec<f64>> {
    let nn = x.len();
    assert!(nn > m, "need more nodes than the derivative order");
    let mut w = vec![vec![0.0; nn]; m + 1];
    let mut c1 = 1.0;
    let mut c4 = x[0] - x0;
    w[0][0] = 1.0;
    for i in 1..nn {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = x[i] - x0;
        for j in 0..i {
            let c3 = x[i] - x[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    w[k][i] = c1 * (k as f64 * w[k - 1][i - 1] - c5 * w[k][i - 1]) / c2;
                }
                w[0][i] = -c1 * c5 * w[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                w[k][j] = (c4 * w[k][j] - k as f64 * w[k - 1][j]) / c3;
            }
            w[0][j] = c4 * w[0][j] / c3;
        }
        c1 = c2;
    }
    w
}

/// First and second derivative of sampled data at interior node `i` of a
/// uniform-spacing grid, using a centered 5-point stencil. Near the ends
/// the stencil shifts to stay inside the grid. Fourth-order accurate.
pub fn derivs_5pt(x: &[f64], y: &[f64], i: usize) -> (f64, f64) {
    let n = x.len();
    assert!(n >= 5, "need at least five samples");
    let lo = i.saturating_sub(2).min(n - 5);
    let nodes = &x[lo..lo + 5];
    let w = fd_weights(nodes, x[i], 2);
    let mut d1 = 0.0;
    let mut d2 = 0.0;
    for (j, &yj) in y[lo..lo + 5].iter().enumerate() {
        d1 += w[1][j] * yj;
        d2 += w[2][j] * yj;
    }
    (d1, d2)
}
