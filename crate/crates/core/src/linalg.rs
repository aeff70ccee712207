//! Small dense linear-algebra helpers shared by every module.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// Dense complex square matrix; the carrier of every linear operator in the crate.
pub type Operator = DMatrix<Complex64>;

/// Default tolerance for predicates (hermiticity, positivity, span membership).
pub const PREDICATE_TOL: f64 = 1e-9;
/// Default tolerance for algebraic identities on well-conditioned inputs.
pub const IDENTITY_TOL: f64 = 1e-12;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(n: usize) -> Operator {
    DMatrix::identity(n, n)
}

pub fn zeros(n: usize) -> Operator {
    DMatrix::zeros(n, n)
}

/// Builds an operator from rows of complex entries.
pub fn from_rows(rows: &[Vec<Complex64>]) -> Operator {
    let n = rows.len();
    let m = rows.first().map_or(0, |r| r.len());
    DMatrix::from_fn(n, m, |i, j| rows[i][j])
}

/// Builds an operator from rows of real entries.
pub fn from_real_rows(rows: &[Vec<f64>]) -> Operator {
    let n = rows.len();
    let m = rows.first().map_or(0, |r| r.len());
    DMatrix::from_fn(n, m, |i, j| c(rows[i][j], 0.0))
}

pub fn diag(entries: &[Complex64]) -> Operator {
    DMatrix::from_diagonal(&DVector::from_row_slice(entries))
}

pub fn commutator(a: &Operator, b: &Operator) -> Operator {
    a * b - b * a
}

pub fn anticommutator(a: &Operator, b: &Operator) -> Operator {
    a * b + b * a
}

/// Frobenius norm.
pub fn fro(a: &Operator) -> f64 {
    a.norm()
}

/// Spectral norm (largest singular value).
pub fn op_norm(a: &Operator) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    a.clone().singular_values().max()
}

/// Residual scaled by `max(1, scale)`, the convention used by every check.
pub fn relative(residual: f64, scale: f64) -> f64 {
    residual / scale.max(1.0)
}

/// Inverse with a conditioning guard; `None` when the matrix is numerically singular.
pub fn inverse(a: &Operator) -> Option<Operator> {
    if a.nrows() != a.ncols() {
        return None;
    }
    if a.is_empty() {
        return Some(a.clone());
    }
    let sv = a.clone().singular_values();
    let max = sv.max();
    let min = sv.min();
    if max == 0.0 || min <= max * 1e-13 {
        return None;
    }
    a.clone().try_inverse()
}

pub fn is_hermitian(a: &Operator, tol: f64) -> bool {
    relative(fro(&(a - a.adjoint())), fro(a)) <= tol
}

/// Eigen-decomposition of the hermitian part `(a + a†)/2`, eigenvalues ascending.
pub fn hermitian_eigen(a: &Operator) -> (Vec<f64>, Operator) {
    let h = (a + a.adjoint()) * c(0.5, 0.0);
    let eig = h.clone().symmetric_eigen();
    let mut idx: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    idx.sort_by(|&x, &y| eig.eigenvalues[x].total_cmp(&eig.eigenvalues[y]));
    let values = idx.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = DMatrix::from_fn(h.nrows(), idx.len(), |r, k| eig.eigenvectors[(r, idx[k])]);
    (values, vectors)
}

/// Smallest eigenvalue of the hermitian part.
pub fn min_eigenvalue(a: &Operator) -> f64 {
    let (values, _) = hermitian_eigen(a);
    values.first().copied().unwrap_or(f64::INFINITY)
}

pub fn kron(a: &Operator, b: &Operator) -> Operator {
    a.kronecker(b)
}

/// Column-stacking vectorization.
pub fn vectorize(a: &Operator) -> Vec<Complex64> {
    a.as_slice().to_vec()
}

fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Orthonormal basis of the linear span of a family of operators, built by
/// modified Gram-Schmidt with one reorthogonalisation pass.
#[derive(Debug, Clone)]
pub struct Span {
    rows: usize,
    cols: usize,
    basis: Vec<Vec<Complex64>>,
    kept: Vec<usize>,
}

impl Span {
    pub fn new(rows: usize, cols: usize) -> Self {
        Span { rows, cols, basis: Vec::new(), kept: Vec::new() }
    }

    /// Span of `ops`; an operator is kept when its component orthogonal to the
    /// previous ones exceeds `tol` relative to its own norm.
    pub fn of(ops: &[Operator], tol: f64) -> Self {
        let (rows, cols) = ops.first().map_or((0, 0), |o| o.shape());
        let mut span = Span::new(rows, cols);
        for (k, op) in ops.iter().enumerate() {
            if span.push(op, tol) {
                span.kept.push(k);
            }
        }
        span
    }

    fn orthogonal_part(&self, v: &[Complex64]) -> Vec<Complex64> {
        let mut w = v.to_vec();
        for _ in 0..2 {
            for q in &self.basis {
                let p = inner(q, &w);
                for (wi, qi) in w.iter_mut().zip(q) {
                    *wi -= p * qi;
                }
            }
        }
        w
    }

    /// Adds `op` to the span when it is independent; returns whether it was added.
    pub fn push(&mut self, op: &Operator, tol: f64) -> bool {
        let v = vectorize(op);
        let scale = norm(&v);
        if scale == 0.0 {
            return false;
        }
        let w = self.orthogonal_part(&v);
        let r = norm(&w);
        if r <= tol * scale {
            return false;
        }
        self.basis.push(w.into_iter().map(|x| x / r).collect());
        true
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Indices (into the family passed to [`Span::of`]) of the operators kept as independent.
    pub fn kept(&self) -> &[usize] {
        &self.kept
    }

    /// Frobenius norm of the component of `op` orthogonal to the span.
    pub fn distance(&self, op: &Operator) -> f64 {
        norm(&self.orthogonal_part(&vectorize(op)))
    }

    /// Distance to the span relative to the spectral norm of `op`.
    pub fn relative_distance(&self, op: &Operator) -> f64 {
        let d = self.distance(op);
        if d == 0.0 {
            return 0.0;
        }
        d / op_norm(op).max(f64::MIN_POSITIVE)
    }

    pub fn contains(&self, op: &Operator, tol: f64) -> bool {
        self.relative_distance(op) <= tol
    }

    /// Orthonormal basis elements reshaped back into operators.
    pub fn basis_operators(&self) -> Vec<Operator> {
        self.basis
            .iter()
            .map(|v| DMatrix::from_column_slice(self.rows, self.cols, v))
            .collect()
    }
}

/// Least-squares coefficients `x` minimising `‖Σ x_k ops_k − target‖_F`,
/// together with the residual norm. Minimum-norm solution when `ops` is dependent.
pub fn solve_in_span(ops: &[Operator], target: &Operator) -> (Vec<Complex64>, f64) {
    if ops.is_empty() {
        return (Vec::new(), fro(target));
    }
    let m = target.len();
    let a = DMatrix::from_fn(m, ops.len(), |r, k| ops[k].as_slice()[r]);
    let b = DVector::from_column_slice(target.as_slice());
    let x = pseudo_solve(&a, &b);
    let r = (&a * &x - &b).norm();
    (x.iter().copied().collect(), r)
}

fn pseudo_solve(a: &DMatrix<Complex64>, b: &DVector<Complex64>) -> DVector<Complex64> {
    let (q, r) = thin_qr(a);
    let rhs = q.adjoint() * b;
    let (sigma, v, w) = jacobi_svd(r);
    let cutoff = sigma.iter().fold(0.0f64, |m, x| m.max(*x)) * 1e-12 * (a.nrows().max(a.ncols()) as f64);
    let mut x = DVector::zeros(a.ncols());
    for (k, s) in sigma.iter().enumerate() {
        if *s > cutoff {
            let coeff = w.column(k).dotc(&rhs) / c(s * s, 0.0);
            x += v.column(k) * coeff;
        }
    }
    x
}

/// `A = QR` with `Q` having orthonormal columns and `R` of size `min(m,n) × n`.
fn thin_qr(a: &DMatrix<Complex64>) -> (DMatrix<Complex64>, DMatrix<Complex64>) {
    if a.nrows() <= a.ncols() {
        return (DMatrix::identity(a.nrows(), a.nrows()), a.clone());
    }
    let qr = a.clone().qr();
    (qr.q(), qr.r())
}

/// One-sided Jacobi SVD: singular values `σ`, unitary `V` and `W = AV` whose columns are
/// mutually orthogonal with norms `σ`. Used instead of the bidiagonal SVD, which loses
/// accuracy on some rank-deficient complex inputs.
fn jacobi_svd(mut w: DMatrix<Complex64>) -> (Vec<f64>, DMatrix<Complex64>, DMatrix<Complex64>) {
    let n = w.ncols();
    let mut v: DMatrix<Complex64> = DMatrix::identity(n, n);
    // Columns below this squared norm are numerically zero; rotating them only degrades `V`.
    let negligible = w.norm_squared() * 1e-40;
    for _ in 0..80 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = w.column(p).norm_squared();
                let beta = w.column(q).norm_squared();
                let gamma = w.column(p).dotc(&w.column(q));
                let g = gamma.norm();
                if alpha.min(beta) <= negligible || g <= 1e-15 * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let phase = phase / phase.norm();
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = cs * t;
                for m in [&mut w, &mut v] {
                    for r in 0..m.nrows() {
                        let x = m[(r, p)];
                        let y = m[(r, q)] * phase.conj();
                        m[(r, p)] = x * cs - y * sn;
                        m[(r, q)] = x * sn + y * cs;
                    }
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let sigma = (0..n).map(|k| w.column(k).norm()).collect();
    (sigma, v, w)
}

/// Orthonormal basis of the kernel of a complex matrix (singular values below `rel_tol·σ_max`).
pub fn null_space(a: &DMatrix<Complex64>, rel_tol: f64) -> Vec<DVector<Complex64>> {
    if a.ncols() == 0 {
        return Vec::new();
    }
    let (_, r) = thin_qr(a);
    let (sigma, v, _) = jacobi_svd(r);
    let smax = sigma.iter().fold(0.0f64, |m, x| m.max(*x));
    let cutoff = if smax == 0.0 { 0.5 } else { smax * rel_tol };
    (0..a.ncols()).filter(|&k| sigma[k] <= cutoff).map(|k| v.column(k).into_owned()).collect()
}

/// Orthonormal basis of the kernel of a real matrix.
pub fn real_null_space(a: &DMatrix<f64>, rel_tol: f64) -> Vec<DVector<f64>> {
    let kernel = null_space(&a.map(|x| c(x, 0.0)), rel_tol);
    // The complex kernel is spanned by real vectors; pick them out of the real and imaginary parts.
    let mut basis: Vec<DVector<f64>> = Vec::new();
    for z in &kernel {
        for mut x in [z.map(|e| e.re), z.map(|e| e.im)] {
            for b in &basis {
                let d = b.dot(&x);
                x -= b * d;
            }
            let nx = x.norm();
            if nx > 1e-6 && basis.len() < kernel.len() {
                basis.push(x / nx);
            }
        }
    }
    basis
}

/// Entry of largest modulus, ties broken by the first in row-major order.
pub fn dominant_entry(a: &Operator) -> Complex64 {
    let mut best = ZERO;
    for r in 0..a.nrows() {
        for col in 0..a.ncols() {
            let z = a[(r, col)];
            if z.norm() > best.norm() * (1.0 + 1e-9) {
                best = z;
            }
        }
    }
    best
}

/// First entry in row-major order whose modulus exceeds `tol·max|a_ij|`.
pub fn first_significant_entry(a: &Operator, tol: f64) -> Option<Complex64> {
    let scale = a.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return None;
    }
    for r in 0..a.nrows() {
        for col in 0..a.ncols() {
            if a[(r, col)].norm() > tol * scale {
                return Some(a[(r, col)]);
            }
        }
    }
    None
}

/// Block-diagonal direct sum.
pub fn direct_sum(blocks: &[Operator]) -> Operator {
    let n: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut out = zeros(n);
    let mut at = 0;
    for b in blocks {
        out.view_mut((at, at), b.shape()).copy_from(b);
        at += b.nrows();
    }
    out
}
