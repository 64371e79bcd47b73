//! Solvers for `(I - Q) x = b` with `Q` a substochastic matrix.

/// Largest system solved by dense elimination; larger ones use sweeps.
pub const DENSE_LIMIT: usize = 512;
pub const SWEEP_TOLERANCE: f64 = 1e-12;
pub const SWEEP_CAP: usize = 10_000_000;

/// `I - Q` for a row-major `n x n` substochastic `Q`, ready to solve against
/// several right-hand sides.
pub(crate) enum Solver {
    Dense(Lu),
    Sweep { q: Vec<f64>, n: usize },
}

impl Solver {
    pub fn new(q: Vec<f64>, n: usize) -> Self {
        if n <= DENSE_LIMIT {
            let mut a = q;
            for (i, row) in a.chunks_mut(n.max(1)).enumerate().take(n) {
                for (j, x) in row.iter_mut().enumerate() {
                    *x = if i == j { 1.0 - *x } else { -*x };
                }
            }
            Solver::Dense(Lu::factor(a, n))
        } else {
            Solver::Sweep { q, n }
        }
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        match self {
            Solver::Dense(lu) => lu.solve(b),
            Solver::Sweep { q, n } => gauss_seidel(q, *n, b),
        }
    }
}

/// LU factorisation with partial pivoting.
pub(crate) struct Lu {
    a: Vec<f64>,
    perm: Vec<usize>,
    n: usize,
}

impl Lu {
    fn factor(mut a: Vec<f64>, n: usize) -> Self {
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let pivot = (k..n)
                .max_by(|&i, &j| a[i * n + k].abs().total_cmp(&a[j * n + k].abs()))
                .unwrap_or(k);
            if pivot != k {
                for j in 0..n {
                    a.swap(k * n + j, pivot * n + j);
                }
                perm.swap(k, pivot);
            }
            let d = a[k * n + k];
            if d == 0.0 {
                continue;
            }
            for i in k + 1..n {
                let f = a[i * n + k] / d;
                if f == 0.0 {
                    continue;
                }
                a[i * n + k] = f;
                for j in k + 1..n {
                    a[i * n + j] -= f * a[k * n + j];
                }
            }
        }
        Self { a, perm, n }
    }

    fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        let a = &self.a;
        let mut x: Vec<f64> = self.perm.iter().map(|&i| b[i]).collect();
        for i in 0..n {
            let mut s = x[i];
            for j in 0..i {
                s -= a[i * n + j] * x[j];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in i + 1..n {
                s -= a[i * n + j] * x[j];
            }
            x[i] = s / a[i * n + i];
        }
        x
    }
}

fn gauss_seidel(q: &[f64], n: usize, b: &[f64]) -> Vec<f64> {
    let mut x = vec![0.0; n];
    for _ in 0..SWEEP_CAP {
        let mut delta: f64 = 0.0;
        for i in 0..n {
            let row = &q[i * n..(i + 1) * n];
            let mut s = b[i];
            for (j, &qij) in row.iter().enumerate() {
                if j != i && qij != 0.0 {
                    s += qij * x[j];
                }
            }
            let new = s / (1.0 - row[i]);
            delta = delta.max((new - x[i]).abs());
            x[i] = new;
        }
        if delta < SWEEP_TOLERANCE {
            break;
        }
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dense_and_sweep_agree() {
        // two-state chain leaking to absorption
        let q = vec![0.2, 0.5, 0.3, 0.1];
        let b = vec![1.0, 2.0];
        let dense = Solver::new(q.clone(), 2).solve(&b);
        let sweep = gauss_seidel(&q, 2, &b);
        for (d, s) in dense.iter().zip(&sweep) {
            assert!((d - s).abs() < 1e-10);
        }
        // hand solution of [[0.8, -0.5], [-0.3, 0.9]] x = [1, 2]
        let det = 0.8 * 0.9 - 0.5 * 0.3;
        assert!((dense[0] - (0.9 * 1.0 + 0.5 * 2.0) / det).abs() < 1e-12);
        assert!((dense[1] - (0.3 * 1.0 + 0.8 * 2.0) / det).abs() < 1e-12);
    }

    #[test]
    fn pivoting_handles_zero_diagonal() {
        // I - Q with Q having a 1 on the diagonal of row 0 needs a row swap
        // only if the system is still nonsingular overall.
        let q = vec![0.0, 1.0, 0.5, 0.0];
        let x = Solver::new(q, 2).solve(&[1.0, 1.0]);
        // x0 = 1 + x1, x1 = 1 + 0.5 x0  ->  x0 = 4, x1 = 3
        assert!((x[0] - 4.0).abs() < 1e-12);
        assert!((x[1] - 3.0).abs() < 1e-12);
    }
}
