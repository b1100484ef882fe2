use nalgebra::DMatrix;

/// Real and imaginary parts of `(1/N) Σ e^{i t X_j}`.
pub fn empirical_chf_complex(sample: &[f64], t: f64) -> (f64, f64) {
    let n = sample.len() as f64;
    let (c, s) = sample.iter().fold((0.0, 0.0), |(c, s), &x| {
        let (sin, cos) = (t * x).sin_cos();
        (c + cos, s + sin)
    });
    (c / n, s / n)
}

/// Real part of the empirical characteristic function, `mean cos(t X_j)`.
pub fn empirical_chf(sample: &[f64], t: f64) -> f64 {
    empirical_chf_complex(sample, t).0
}

/// Smallest eigenvalue of the matrix `[chf(t_i − t_j)]`.
///
/// A characteristic function is positive definite, so this matrix is
/// positive semidefinite for every grid. A clearly negative value proves
/// `chf` is not a characteristic function; a nonnegative one is only a
/// sanity check. Intended for real, even `chf`.
pub fn chf_positive_definiteness_probe(chf: impl Fn(f64) -> f64, grid: &[f64]) -> f64 {
    let n = grid.len();
    if n == 0 {
        return 0.0;
    }
    let m = DMatrix::from_fn(n, n, |i, j| chf(grid[i] - grid[j]));
    m.symmetric_eigenvalues().min()
}
