//! Floating-point integer-relation search (LLL on a scaled lattice).
//!
//! This is a heuristic for numeric inputs that carry no declared basis. Its
//! output is advisory: a returned relation has a small residual at `f64`
//! precision, which neither proves the relation nor rules out others.

/// A candidate relation `Σ a_i x_i ≈ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct RelationCandidate {
    pub coefficients: Vec<i64>,
    pub residual: f64,
}

/// Searches for a small integer vector `a ≠ 0` with `|Σ a_i x_i|` tiny.
///
/// `scale` weights the residual coordinate (around `1e9`–`1e12` for inputs
/// known to ~15 digits); candidates with any `|a_i| > max_coeff` or residual
/// above `tol` are discarded.
pub fn integer_relation(values: &[f64], scale: f64, max_coeff: i64, tol: f64) -> Option<RelationCandidate> {
    let n = values.len();
    if n < 2 || values.iter().any(|v| !v.is_finite()) {
        return None;
    }
    let mut basis: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let mut row = vec![0.0; n + 1];
            row[i] = 1.0;
            row[n] = (scale * values[i]).round();
            row
        })
        .collect();
    lll_reduce(&mut basis, 0.75);
    basis
        .iter()
        .filter_map(|row| {
            let coeffs: Vec<i64> = row[..n].iter().map(|&x| x.round() as i64).collect();
            if coeffs.iter().all(|&c| c == 0) || coeffs.iter().any(|c| c.abs() > max_coeff) {
                return None;
            }
            let residual = coeffs.iter().zip(values).map(|(&c, &x)| c as f64 * x).sum::<f64>().abs();
            (residual <= tol).then_some(RelationCandidate { coefficients: coeffs, residual })
        })
        .min_by(|a, b| {
            let na: i64 = a.coefficients.iter().map(|c| c.abs()).sum();
            let nb: i64 = b.coefficients.iter().map(|c| c.abs()).sum();
            na.cmp(&nb).then(a.residual.total_cmp(&b.residual))
        })
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn gram_schmidt(b: &[Vec<f64>]) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let n = b.len();
    let mut star: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut mu = vec![vec![0.0; n]; n];
    for i in 0..n {
        let mut v = b[i].clone();
        for j in 0..i {
            let denom = dot(&star[j], &star[j]);
            mu[i][j] = if denom > 0.0 { dot(&b[i], &star[j]) / denom } else { 0.0 };
            for (x, s) in v.iter_mut().zip(&star[j]) {
                *x -= mu[i][j] * s;
            }
        }
        star.push(v);
    }
    (star, mu)
}

/// Textbook LLL with Lovász parameter `delta`; Gram–Schmidt data is
/// recomputed after each change, which is fine for the small dimensions
/// used here.
fn lll_reduce(b: &mut [Vec<f64>], delta: f64) {
    let n = b.len();
    let mut k = 1;
    let mut guard = 0usize;
    while k < n && guard < 100_000 {
        guard += 1;
        let (_, mu) = gram_schmidt(b);
        for j in (0..k).rev() {
            let q = mu[k][j].round();
            if q != 0.0 {
                let bj = b[j].clone();
                for (x, y) in b[k].iter_mut().zip(&bj) {
                    *x -= q * y;
                }
            }
        }
        let (star, mu) = gram_schmidt(b);
        let lhs = dot(&star[k], &star[k]);
        let rhs = (delta - mu[k][k - 1] * mu[k][k - 1]) * dot(&star[k - 1], &star[k - 1]);
        if lhs >= rhs {
            k += 1;
        } else {
            b.swap(k, k - 1);
            k = (k - 1).max(1);
        }
    }
}
