//! Symmetric tridiagonal storage, inertia counts and a pivoted solver.

/// Symmetric tridiagonal matrix; `off[i]` couples rows `i` and `i + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiag {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl SymTridiag {
    pub fn zeros(n: usize) -> Self {
        Self { diag: vec![0.0; n], off: vec![0.0; n.saturating_sub(1)] }
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let n = self.dim();
        let mut y: Vec<f64> = self.diag.iter().zip(x).map(|(d, v)| d * v).collect();
        for i in 0..n.saturating_sub(1) {
            y[i] += self.off[i] * x[i + 1];
            y[i + 1] += self.off[i] * x[i];
        }
        y
    }

    /// `xᵀ A y`.
    pub fn form(&self, x: &[f64], y: &[f64]) -> f64 {
        self.matvec(y).iter().zip(x).map(|(a, b)| a * b).sum()
    }

    /// `xᵀ A x` written as `Σ rᵢ xᵢ² - Σ offᵢ (xᵢ₊₁ - xᵢ)²` with row sums `rᵢ`,
    /// which avoids the cancellation of the plain form for smooth `x` when
    /// the row sums nearly vanish.
    pub fn form_by_differences(&self, x: &[f64]) -> f64 {
        let n = self.dim();
        let mut s = 0.0;
        for i in 0..n {
            let left = if i > 0 { self.off[i - 1] } else { 0.0 };
            let right = if i + 1 < n { self.off[i] } else { 0.0 };
            s += (self.diag[i] + left + right) * x[i] * x[i];
        }
        for i in 0..n.saturating_sub(1) {
            let d = x[i + 1] - x[i];
            s -= self.off[i] * d * d;
        }
        s
    }

    /// Largest absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let left = if i > 0 { self.off[i - 1].abs() } else { 0.0 };
                let right = if i + 1 < n { self.off[i].abs() } else { 0.0 };
                self.diag[i].abs() + left + right
            })
            .fold(0.0, f64::max)
    }

    /// Dense copy, for tests.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let n = self.dim();
        let mut a = vec![vec![0.0; n]; n];
        for i in 0..n {
            a[i][i] = self.diag[i];
            if i + 1 < n {
                a[i][i + 1] = self.off[i];
                a[i + 1][i] = self.off[i];
            }
        }
        a
    }
}

/// Linear combination `K - s B - t M` of three tridiagonals with the same pattern.
pub fn combine(k: &SymTridiag, b: &SymTridiag, s: f64, m: &SymTridiag, t: f64) -> SymTridiag {
    SymTridiag {
        diag: (0..k.dim()).map(|i| k.diag[i] - s * b.diag[i] - t * m.diag[i]).collect(),
        off: (0..k.off.len()).map(|i| k.off[i] - s * b.off[i] - t * m.off[i]).collect(),
    }
}

/// Number of negative pivots in the `LDLᵀ` factorization of `K - s B - t M`.
///
/// By Sylvester's law this is the number of negative eigenvalues. An exactly
/// zero pivot is replaced by a positive value of ulp size relative to the
/// row, which moves the probe by a rounding-level shift instead of breaking
/// down.
pub fn negative_count(k: &SymTridiag, b: &SymTridiag, s: f64, m: &SymTridiag, t: f64) -> usize {
    let n = k.dim();
    let mut count = 0;
    let mut prev = 1.0;
    let mut prev_off = 0.0;
    for i in 0..n {
        let a = k.diag[i] - s * b.diag[i] - t * m.diag[i];
        let mut d = a - prev_off * prev_off / prev;
        if d == 0.0 {
            d = f64::EPSILON * (a.abs() + prev_off.abs()).max(f64::MIN_POSITIVE);
        }
        if d < 0.0 {
            count += 1;
        }
        prev = d;
        if i + 1 < n {
            prev_off = k.off[i] - s * b.off[i] - t * m.off[i];
        }
    }
    count
}

/// Solves `A x = rhs` by Gaussian elimination with partial pivoting.
///
/// Returns `None` if a pivot is exactly zero.
pub fn solve(a: &SymTridiag, rhs: &[f64]) -> Option<Vec<f64>> {
    let n = a.dim();
    if n == 0 {
        return Some(Vec::new());
    }
    // rows stored as (sub, main, sup, sup2) after pivoting
    let mut dl: Vec<f64> = a.off.clone();
    let mut d: Vec<f64> = a.diag.clone();
    let mut du: Vec<f64> = a.off.clone();
    let mut du2 = vec![0.0; n.saturating_sub(2)];
    let mut b = rhs.to_vec();
    for i in 0..n - 1 {
        if d[i].abs() >= dl[i].abs() {
            if d[i] == 0.0 {
                return None;
            }
            let f = dl[i] / d[i];
            d[i + 1] -= f * du[i];
            b[i + 1] -= f * b[i];
            dl[i] = 0.0;
        } else {
            // swap rows i and i+1
            let f = d[i] / dl[i];
            d[i] = dl[i];
            let tmp = d[i + 1];
            d[i + 1] = du[i] - f * tmp;
            du[i] = tmp;
            if i + 2 < n {
                du2[i] = du[i + 1];
                du[i + 1] = -f * du2[i];
            }
            b.swap(i, i + 1);
            b[i + 1] -= f * b[i];
            dl[i] = 0.0;
        }
    }
    if d[n - 1] == 0.0 {
        return None;
    }
    let mut x = vec![0.0; n];
    x[n - 1] = b[n - 1] / d[n - 1];
    if n >= 2 {
        x[n - 2] = (b[n - 2] - du[n - 2] * x[n - 1]) / d[n - 2];
    }
    for i in (0..n.saturating_sub(2)).rev() {
        x[i] = (b[i] - du[i] * x[i + 1] - du2[i] * x[i + 2]) / d[i];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> SymTridiag {
        SymTridiag { diag: vec![2.0, -1.0, 0.5, 3.0, 1e-3], off: vec![1.0, 4.0, -2.0, 0.7] }
    }

    #[test]
    fn solve_matches_matvec() {
        let a = sample();
        let x_true = vec![1.0, -2.0, 0.5, 3.0, -1.5];
        let rhs = a.matvec(&x_true);
        let x = solve(&a, &rhs).unwrap();
        for (u, v) in x.iter().zip(&x_true) {
            assert!((u - v).abs() < 1e-12, "{x:?}");
        }
    }

    #[test]
    fn solve_needs_pivoting() {
        // zero leading entry forces a row swap
        let a = SymTridiag { diag: vec![0.0, 0.0, 1.0], off: vec![1.0, 1.0] };
        let x_true = vec![3.0, -1.0, 2.0];
        let x = solve(&a, &a.matvec(&x_true)).unwrap();
        for (u, v) in x.iter().zip(&x_true) {
            assert!((u - v).abs() < 1e-14);
        }
    }

    #[test]
    fn negative_count_is_inertia() {
        // -u'' stencil has eigenvalues 2 - 2cos(kπ/(n+1))
        let n = 20;
        let k = SymTridiag { diag: vec![2.0; n], off: vec![-1.0; n - 1] };
        let id = SymTridiag { diag: vec![1.0; n], off: vec![0.0; n - 1] };
        let zero = SymTridiag::zeros(n);
        for shift in [0.0, 0.1, 1.1, 2.5, 3.9, 4.1] {
            let expected = (1..=n)
                .filter(|&j| 2.0 - 2.0 * (j as f64 * std::f64::consts::PI / (n as f64 + 1.0)).cos() < shift)
                .count();
            assert_eq!(negative_count(&k, &zero, 0.0, &id, shift), expected, "shift {shift}");
        }
    }

    #[test]
    fn difference_form_matches_plain_form() {
        let a = sample();
        let x = vec![0.3, -1.0, 2.0, 0.5, 1.5];
        assert!((a.form_by_differences(&x) - a.form(&x, &x)).abs() < 1e-12);
    }

    #[test]
    fn zero_pivot_does_not_panic() {
        let k = SymTridiag { diag: vec![0.0, 1.0], off: vec![1.0] };
        let z = SymTridiag::zeros(2);
        // eigenvalues (1 ± √5)/2: exactly one negative
        assert_eq!(negative_count(&k, &z, 0.0, &z, 0.0), 1);
    }
}
