//! Irreducible representations of the complex Clifford algebra of `ℝ^{1,n-1}` for even `n`,
//! with chirality, charge conjugation and a Krein product for which `e₀` is future directed.
//!
//! Also hosts the KO sign tables and the spin lift of Lorentz matrices.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kreinlin::{
    antilinear_adjoint, is_krein_positive, krein_adjoint, AntilinearOperator, KreinSpace,
};
use crate::linalg::{
    self, c, first_significant_entry, fro, identity, inverse, kron, null_space, Operator, I, ONE,
    PREDICATE_TOL, ZERO,
};

/// Signature convention of a structure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Signature {
    Antilorentzian,
    Lorentzian,
    Euclidean,
}

impl std::fmt::Display for Signature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Signature::Antilorentzian => "antilorentzian",
            Signature::Lorentzian => "lorentzian",
            Signature::Euclidean => "euclidean",
        })
    }
}

impl std::str::FromStr for Signature {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "antilorentzian" => Ok(Signature::Antilorentzian),
            "lorentzian" => Ok(Signature::Lorentzian),
            "euclidean" => Ok(Signature::Euclidean),
            other => Err(Error::InvalidInput(format!("unknown signature `{other}`"))),
        }
    }
}

/// One column of a KO sign table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct KoSignEntry {
    pub signature: Signature,
    pub metric_dim_mod8: u8,
    pub ko_dim_mod8: u8,
    pub epsilon: i8,
    /// ε'', the sign in `Jχ = ε''χJ`.
    pub epsilon2: i8,
    pub kappa: i8,
}

const fn entry(signature: Signature, m: u8, ko: u8, e: i8, e2: i8, k: i8) -> KoSignEntry {
    KoSignEntry { signature, metric_dim_mod8: m, ko_dim_mod8: ko, epsilon: e, epsilon2: e2, kappa: k }
}

const ANTILORENTZIAN: [KoSignEntry; 4] = [
    entry(Signature::Antilorentzian, 0, 2, -1, -1, -1),
    entry(Signature::Antilorentzian, 2, 0, 1, 1, -1),
    entry(Signature::Antilorentzian, 4, 6, 1, -1, -1),
    entry(Signature::Antilorentzian, 6, 4, -1, 1, -1),
];

const LORENTZIAN: [KoSignEntry; 4] = [
    entry(Signature::Lorentzian, 0, 6, 1, -1, 1),
    entry(Signature::Lorentzian, 2, 0, 1, 1, -1),
    entry(Signature::Lorentzian, 4, 2, -1, -1, 1),
    entry(Signature::Lorentzian, 6, 4, -1, 1, -1),
];

/// The four even columns of the table for `signature`.
///
/// Euclidean columns are the images of the antilorentzian ones under Wick rotation:
/// KO dimension `k ↦ 2 − k`, and `ε, ε'', κ` all change sign.
pub fn ko_table(signature: Signature) -> [KoSignEntry; 4] {
    match signature {
        Signature::Antilorentzian => ANTILORENTZIAN,
        Signature::Lorentzian => LORENTZIAN,
        Signature::Euclidean => ANTILORENTZIAN.map(|e| KoSignEntry {
            signature: Signature::Euclidean,
            metric_dim_mod8: e.metric_dim_mod8,
            ko_dim_mod8: wick_ko(e.ko_dim_mod8),
            epsilon: -e.epsilon,
            epsilon2: -e.epsilon2,
            kappa: -e.kappa,
        }),
    }
}

/// KO dimension after a Wick rotation in either direction: `k ↦ 2 − k mod 8`.
pub fn wick_ko(ko: u8) -> u8 {
    (2 + 8 - (ko % 8)) % 8
}

/// Table column for a claimed KO dimension.
pub fn ko_signs(signature: Signature, ko_dim: u8) -> Result<KoSignEntry> {
    ko_table(signature)
        .into_iter()
        .find(|e| e.ko_dim_mod8 == ko_dim % 8)
        .ok_or(Error::UnknownKoDimension { signature: signature.to_string(), ko: ko_dim % 8 })
}

/// Table column for a metric dimension.
pub fn signs_for_metric_dim(signature: Signature, n: usize) -> Result<KoSignEntry> {
    ko_table(signature)
        .into_iter()
        .find(|e| e.metric_dim_mod8 as usize == n % 8)
        .ok_or(Error::InvalidInput(format!("odd metric dimension {n}")))
}

/// Irreducible representation of `Cl(ℝ^{1,n-1}) ⊗ ℂ` with its spinor structure.
#[derive(Debug, Clone)]
pub struct CliffordRep {
    n: usize,
    gamma: Vec<Operator>,
    chi: Operator,
    krein: KreinSpace,
    real: AntilinearOperator,
    signs: KoSignEntry,
}

fn pauli() -> [Operator; 3] {
    [
        linalg::from_rows(&[vec![ZERO, ONE], vec![ONE, ZERO]]),
        linalg::from_rows(&[vec![ZERO, -I], vec![I, ZERO]]),
        linalg::from_rows(&[vec![ONE, ZERO], vec![ZERO, -ONE]]),
    ]
}

/// Hermitian anticommuting generators squaring to one, each entrywise real or imaginary.
fn euclidean_generators(n: usize) -> Vec<Operator> {
    let [s1, s2, s3] = pauli();
    let mut gens = vec![s1.clone(), s2.clone()];
    while gens.len() < n {
        let mut next: Vec<Operator> = gens.iter().map(|g| kron(g, &s3)).collect();
        let id = identity(gens[0].nrows());
        next.push(kron(&id, &s1));
        next.push(kron(&id, &s2));
        gens = next;
    }
    gens
}

fn is_real(a: &Operator) -> bool {
    a.iter().all(|z| z.im == 0.0)
}

/// Builds the representation for even `n` in `2..=8`.
pub fn build_clifford(n: usize) -> Result<CliffordRep> {
    if n % 2 == 1 {
        return Err(Error::InvalidInput(format!("metric dimension must be even, got {n}")));
    }
    if !(2..=8).contains(&n) {
        return Err(Error::InvalidInput(format!("metric dimension {n} outside 2..=8")));
    }
    let e = euclidean_generators(n);
    let d = e[0].nrows();
    let gamma: Vec<Operator> =
        e.iter().enumerate().map(|(k, g)| if k == 0 { g.clone() } else { g * I }).collect();

    let product = gamma.iter().fold(identity(d), |acc, g| acc * g);
    let sq = (&product * &product)[(0, 0)];
    let chi = if sq.re > 0.0 { product } else { product * I };

    // Charge conjugation: m·conj(γ)·m⁻¹ = −γ. The product of the imaginary gammas works
    // when there is an odd number of them, the product of the real ones otherwise.
    let (real, imag): (Vec<&Operator>, Vec<&Operator>) = gamma.iter().partition(|g| is_real(g));
    let factors = if imag.len() % 2 == 1 { imag } else { real };
    let mut m = factors.into_iter().fold(identity(d), |acc, g| acc * g);
    let mm = &m * m.map(|z| z.conj());
    let scale = mm[(0, 0)].norm();
    m /= c(scale.sqrt(), 0.0);
    let phase = linalg::dominant_entry(&m);
    m *= phase.conj() / phase.norm();

    let krein = KreinSpace::new(gamma[0].clone())?;
    let signs = signs_for_metric_dim(Signature::Antilorentzian, n)?;
    Ok(CliffordRep { n, gamma, chi, krein, real: AntilinearOperator::new(m), signs })
}

/// Measured signs `(ε, ε'', κ)` of a real structure, `None` where the relation fails.
pub fn measure_signs(
    real: &AntilinearOperator,
    chi: &Operator,
    krein: &KreinSpace,
    tol: f64,
) -> (Option<i8>, Option<i8>, Option<i8>) {
    let n = real.dim();
    let id = identity(n);
    let sign_of = |a: &Operator| -> Option<i8> {
        let scale = fro(a).max(1.0);
        if fro(&(a - &id)) <= tol * scale {
            Some(1)
        } else if fro(&(a + &id)) <= tol * scale {
            Some(-1)
        } else {
            None
        }
    };
    let eps = sign_of(&real.square());
    let jchi = real.conjugate(chi).ok();
    let eps2 = jchi.and_then(|x| {
        if fro(&(&x - chi)) <= tol * fro(chi).max(1.0) {
            Some(1)
        } else if fro(&(&x + chi)) <= tol * fro(chi).max(1.0) {
            Some(-1)
        } else {
            None
        }
    });
    let kappa = antilinear_adjoint(real, krein).ok().and_then(|jx| sign_of(&jx.compose(real)));
    (eps, eps2, kappa)
}

impl CliffordRep {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Spinor dimension `2^{n/2}`.
    pub fn dim(&self) -> usize {
        self.chi.nrows()
    }

    pub fn gamma(&self) -> &[Operator] {
        &self.gamma
    }

    pub fn chi(&self) -> &Operator {
        &self.chi
    }

    pub fn krein(&self) -> &KreinSpace {
        &self.krein
    }

    pub fn real(&self) -> &AntilinearOperator {
        &self.real
    }

    pub fn signs(&self) -> KoSignEntry {
        self.signs
    }

    /// Minkowski product `g(u,v) = u⁰v⁰ − Σ uᵏvᵏ`.
    pub fn metric(&self, u: &[f64], v: &[f64]) -> f64 {
        u.iter().zip(v).enumerate().map(|(k, (a, b))| if k == 0 { a * b } else { -a * b }).sum()
    }

    /// `ρ(v) = Σ v_μ γ^μ`.
    pub fn vector(&self, v: &[f64]) -> Operator {
        let mut out = linalg::zeros(self.dim());
        for (g, x) in self.gamma.iter().zip(v) {
            out += g * c(*x, 0.0);
        }
        out
    }

    /// `ρ(v) + χρ(w)`, the general odd element when `n = 4`.
    pub fn vector_axial(&self, v: &[f64], w: &[f64]) -> Operator {
        self.vector(v) + &self.chi * self.vector(w)
    }

    /// Coefficients of the projection of `a` onto the span of the gammas, and the residual.
    pub fn vector_part(&self, a: &Operator) -> (Vec<Complex64>, f64) {
        let coeffs = orthogonal_coefficients(a, &self.gamma);
        let mut rest = a.clone();
        for (g, x) in self.gamma.iter().zip(&coeffs) {
            rest -= g * *x;
        }
        (coeffs, fro(&rest))
    }

    /// Decomposition `a = ρ(v) + χρ(w)` of an odd element, with the residual.
    pub fn axial_decomposition(&self, a: &Operator) -> (Vec<Complex64>, Vec<Complex64>, f64) {
        let axial: Vec<Operator> = self.gamma.iter().map(|g| &self.chi * g).collect();
        let v = orthogonal_coefficients(a, &self.gamma);
        let w = orthogonal_coefficients(a, &axial);
        let mut rest = a.clone();
        for (g, x) in self.gamma.iter().zip(&v) {
            rest -= g * *x;
        }
        for (g, x) in axial.iter().zip(&w) {
            rest -= g * *x;
        }
        (v, w, fro(&rest))
    }

    /// Future timelike: `g(v,v) > 0` and `ρ(v)` Krein-positive.
    pub fn is_future_timelike(&self, v: &[f64]) -> bool {
        let e2: f64 = v.iter().map(|x| x * x).sum();
        self.metric(v, v) > PREDICATE_TOL * e2.max(f64::MIN_POSITIVE)
            && is_krein_positive(&self.vector(v), &self.krein, None)
    }

    /// `+1` future timelike, `−1` past timelike, `None` outside the open cone up to `tol`.
    pub fn cone_sign(&self, v: &[f64], tol: f64) -> Option<i8> {
        let e2: f64 = v.iter().map(|x| x * x).sum();
        if e2 == 0.0 || self.metric(v, v) <= tol * e2 {
            return None;
        }
        let neg: Vec<f64> = v.iter().map(|x| -x).collect();
        if self.is_future_timelike(v) {
            Some(1)
        } else if self.is_future_timelike(&neg) {
            Some(-1)
        } else {
            None
        }
    }

    pub fn normalized_trace(&self, a: &Operator) -> Complex64 {
        a.trace() / c(self.dim() as f64, 0.0)
    }

    /// Products `γ^{i₁}⋯γ^{i_k}` over all increasing index sets, ordered by size then lexicographically.
    pub fn clifford_basis(&self) -> Vec<(Vec<usize>, Operator)> {
        let mut sets: Vec<Vec<usize>> = (0u32..(1 << self.n))
            .map(|mask| (0..self.n).filter(|k| mask & (1 << k) != 0).collect())
            .collect();
        sets.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
        sets.into_iter()
            .map(|s| {
                let op = s.iter().fold(identity(self.dim()), |acc, &k| acc * &self.gamma[k]);
                (s, op)
            })
            .collect()
    }

    /// Basis of the even subalgebra, `2^{n-1}` elements starting with the unit.
    pub fn even_basis(&self) -> Vec<(Vec<usize>, Operator)> {
        self.clifford_basis().into_iter().filter(|(s, _)| s.len() % 2 == 0).collect()
    }

    /// The Lorentz matrix `Λ` with `h ρ(e_μ) h⁻¹ = Σ_ν Λ_{νμ} γ^ν`, and the residual of
    /// that decomposition (non-zero when `h` does not conjugate vectors to real vectors).
    pub fn lorentz_of(&self, h: &Operator) -> Result<(DMatrix<f64>, f64)> {
        let hi = inverse(h).ok_or_else(|| Error::Singular("spinor transport".into()))?;
        let mut lambda = DMatrix::zeros(self.n, self.n);
        let mut residual: f64 = 0.0;
        for (mu, g) in self.gamma.iter().enumerate() {
            let (coeffs, res) = self.vector_part(&(h * g * &hi));
            residual = residual.max(res);
            for (nu, z) in coeffs.iter().enumerate() {
                lambda[(nu, mu)] = z.re;
                residual = residual.max(z.im.abs());
            }
        }
        Ok((lambda, residual))
    }

    /// Spin lift of a Lorentz matrix: the `h` with `h ρ(v) h⁻¹ = ρ(Λv)`, normalised so that
    /// `h×h = ±1` and `hJ = Jh`, with a deterministic choice among the two lifts
    /// (positive real trace, else first significant entry with positive real part).
    pub fn spin_lift(&self, lambda: &DMatrix<f64>) -> Result<Operator> {
        let n = self.n;
        if lambda.shape() != (n, n) {
            return Err(Error::DimensionMismatch { expected: n, found: lambda.nrows() });
        }
        let d = self.dim();
        let id = identity(d);
        let mut system = DMatrix::zeros(n * d * d, d * d);
        for mu in 0..n {
            let mut image = linalg::zeros(d);
            for nu in 0..n {
                image += &self.gamma[nu] * c(lambda[(nu, mu)], 0.0);
            }
            let block = kron(&self.gamma[mu].transpose(), &id) - kron(&id, &image);
            system.view_mut((mu * d * d, 0), (d * d, d * d)).copy_from(&block);
        }
        let kernel = null_space(&system, 1e-10);
        if kernel.len() != 1 {
            return Err(Error::InvalidInput(format!(
                "Lorentz matrix has {} independent spinor intertwiners, expected 1",
                kernel.len()
            )));
        }
        let mut h = DMatrix::from_column_slice(d, d, kernel[0].as_slice());
        let hxh = krein_adjoint(&h, &self.krein)? * &h;
        let s = hxh.trace() / c(d as f64, 0.0);
        h /= c(s.norm().sqrt(), 0.0);
        let k = self.real.conjugate(&h)?;
        let lam = h.iter().zip(k.iter()).map(|(a, b)| a.conj() * b).sum::<Complex64>()
            / h.iter().map(|a| a.norm_sqr()).sum::<f64>();
        h *= Complex64::from_polar(1.0, lam.arg() / 2.0);
        let tr = h.trace();
        let flip = if tr.re.abs() > 1e-9 * d as f64 {
            tr.re < 0.0
        } else {
            match first_significant_entry(&h, 1e-9) {
                Some(z) if z.re.abs() > 1e-9 => z.re < 0.0,
                Some(z) => z.im < 0.0,
                None => false,
            }
        };
        if flip {
            h = -h;
        }
        Ok(h)
    }
}

/// Coefficients against a family with `tr(bᵢ† bⱼ) = d·δᵢⱼ`.
fn orthogonal_coefficients(a: &Operator, family: &[Operator]) -> Vec<Complex64> {
    let d = a.nrows() as f64;
    family
        .iter()
        .map(|b| b.iter().zip(a.iter()).map(|(x, y)| x.conj() * y).sum::<Complex64>() / c(d, 0.0))
        .collect()
}

/// Minkowski metric `diag(1, −1, …, −1)`.
pub fn minkowski(n: usize) -> DMatrix<f64> {
    DMatrix::from_fn(n, n, |i, j| if i != j { 0.0 } else if i == 0 { 1.0 } else { -1.0 })
}

/// Boost of rapidity `eta` along spatial axis `axis ≥ 1`.
pub fn boost(n: usize, axis: usize, eta: f64) -> DMatrix<f64> {
    let mut m = DMatrix::identity(n, n);
    m[(0, 0)] = eta.cosh();
    m[(axis, axis)] = eta.cosh();
    m[(0, axis)] = eta.sinh();
    m[(axis, 0)] = eta.sinh();
    m
}

/// Rotation by `angle` in the spatial plane `(a, b)`, both `≥ 1`.
pub fn rotation(n: usize, a: usize, b: usize, angle: f64) -> DMatrix<f64> {
    let mut m = DMatrix::identity(n, n);
    m[(a, a)] = angle.cos();
    m[(b, b)] = angle.cos();
    m[(a, b)] = -angle.sin();
    m[(b, a)] = angle.sin();
    m
}

/// Whether `Λ` preserves the metric, has determinant one and keeps `e₀` future directed.
pub fn is_proper_orthochronous(lambda: &DMatrix<f64>, tol: f64) -> bool {
    let n = lambda.nrows();
    let g = minkowski(n);
    let iso = (lambda.transpose() * &g * lambda - &g).norm() <= tol * lambda.norm().powi(2).max(1.0);
    iso && (lambda.determinant() - 1.0).abs() <= tol * lambda.norm().powi(n as i32).max(1.0)
        && lambda[(0, 0)] > 0.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::anticommutator;
    use proptest::prelude::*;

    #[test]
    fn sign_tables_are_consistent_under_wick_rotation() {
        for e in ko_table(Signature::Antilorentzian) {
            let eu = ko_signs(Signature::Euclidean, wick_ko(e.ko_dim_mod8)).unwrap();
            assert_eq!((eu.epsilon, eu.epsilon2, eu.kappa), (-e.epsilon, -e.epsilon2, 1));
        }
        // Euclidean columns agree with the usual mod 8 table for real even spectral triples.
        let expected = [(0, 1, 1), (2, -1, -1), (4, -1, 1), (6, 1, -1)];
        for (ko, eps, eps2) in expected {
            let e = ko_signs(Signature::Euclidean, ko).unwrap();
            assert_eq!((e.epsilon, e.epsilon2), (eps, eps2), "KO {ko}");
        }
        assert!(ko_signs(Signature::Antilorentzian, 3).is_err());
    }

    #[test]
    fn representation_dimensions() {
        for n in [2, 4, 6, 8] {
            assert_eq!(build_clifford(n).unwrap().dim(), 1 << (n / 2));
        }
        assert!(build_clifford(3).is_err());
        assert!(build_clifford(10).is_err());
        assert!(build_clifford(0).is_err());
    }

    #[test]
    fn invariants_hold_for_every_supported_dimension() {
        for n in [2, 4, 6, 8] {
            let rep = build_clifford(n).unwrap();
            let d = rep.dim();
            let g = minkowski(n);
            for mu in 0..n {
                for nu in 0..n {
                    let ac = anticommutator(&rep.gamma()[mu], &rep.gamma()[nu]);
                    let want = identity(d) * c(2.0 * g[(mu, nu)], 0.0);
                    assert!(fro(&(ac - want)) < 1e-12, "n={n} μ={mu} ν={nu}");
                }
                let gx = krein_adjoint(&rep.gamma()[mu], rep.krein()).unwrap();
                assert!(fro(&(gx - &rep.gamma()[mu])) < 1e-12);
                assert!(fro(&anticommutator(rep.chi(), &rep.gamma()[mu])) < 1e-12);
                let conj = rep.real().conjugate(&rep.gamma()[mu]).unwrap();
                assert!(fro(&(conj + &rep.gamma()[mu])) < 1e-12, "J γ J⁻¹ = −γ fails");
            }
            assert!(fro(&(rep.chi() * rep.chi() - identity(d))) < 1e-12);
            let chix = krein_adjoint(rep.chi(), rep.krein()).unwrap();
            assert!(fro(&(chix + rep.chi())) < 1e-12);
            let (eps, eps2, kappa) = measure_signs(rep.real(), rep.chi(), rep.krein(), 1e-12);
            let s = rep.signs();
            assert_eq!((eps, eps2, kappa), (Some(s.epsilon), Some(s.epsilon2), Some(s.kappa)), "n={n}");
        }
    }

    #[test]
    fn table_examples() {
        let s4 = build_clifford(4).unwrap().signs();
        assert_eq!((s4.epsilon, s4.epsilon2, s4.kappa, s4.ko_dim_mod8), (1, -1, -1, 6));
        let s2 = build_clifford(2).unwrap().signs();
        assert_eq!((s2.epsilon, s2.epsilon2, s2.kappa, s2.ko_dim_mod8), (1, 1, -1, 0));
    }

    #[test]
    fn vector_part_examples() {
        let rep = build_clifford(4).unwrap();
        let (v, r) = rep.vector_part(&rep.gamma()[0]);
        assert!(r < 1e-14 && (v[0] - ONE).norm() < 1e-14 && v[1].norm() < 1e-14);
        let (_, r) = rep.vector_part(&(&rep.gamma()[0] * &rep.gamma()[1]));
        assert!(r > 0.1);
        let (v, r) = rep.vector_part(&rep.vector(&[2.0, 3.0, 0.0, 0.0]));
        assert!(r < 1e-13 && (v[0] - c(2.0, 0.0)).norm() < 1e-13 && (v[1] - c(3.0, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn cone_examples() {
        let rep = build_clifford(4).unwrap();
        assert!(rep.is_future_timelike(&[1.0, 0.0, 0.0, 0.0]));
        assert!(!rep.is_future_timelike(&[-1.0, 0.0, 0.0, 0.0]));
        assert!(!rep.is_future_timelike(&[0.0, 1.0, 0.0, 0.0]));
        assert_eq!(rep.cone_sign(&[-2.0, 1.0, 0.0, 0.0], 1e-9), Some(-1));
        assert_eq!(rep.cone_sign(&[1.0, 1.0, 0.0, 0.0], 1e-9), None);
    }

    #[test]
    fn normalized_trace_examples() {
        let rep = build_clifford(6).unwrap();
        let d = rep.dim();
        assert!((rep.normalized_trace(&identity(d)) - ONE).norm() < 1e-15);
        assert!(rep.normalized_trace(&rep.gamma()[0]).norm() < 1e-15);
        let g0 = &rep.gamma()[0];
        assert!((rep.normalized_trace(&(g0 * g0)) - ONE).norm() < 1e-15);
    }

    #[test]
    fn even_basis_size_and_unit() {
        let rep = build_clifford(4).unwrap();
        let even = rep.even_basis();
        assert_eq!(even.len(), 8);
        assert!(fro(&(&even[0].1 - identity(4))) < 1e-15);
        assert_eq!(rep.clifford_basis().len(), 16);
    }

    #[test]
    fn spin_lift_of_identity_is_identity() {
        let rep = build_clifford(4).unwrap();
        let h = rep.spin_lift(&DMatrix::identity(4, 4)).unwrap();
        assert!(fro(&(h - identity(4))) < 1e-12);
    }

    fn arb_lorentz(n: usize) -> impl Strategy<Value = DMatrix<f64>> {
        proptest::collection::vec(-1.5f64..1.5, n * n).prop_map(move |p| {
            let mut m = DMatrix::identity(n, n);
            let mut k = 0;
            for a in 1..n {
                m *= boost(n, a, p[k]);
                k += 1;
                for b in (a + 1)..n {
                    m *= rotation(n, a, b, 2.0 * p[k]);
                    k += 1;
                }
            }
            m
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn spin_lift_is_a_spin_connection_over_its_matrix(lambda in arb_lorentz(4)) {
            let rep = build_clifford(4).unwrap();
            prop_assert!(is_proper_orthochronous(&lambda, 1e-10));
            let h = rep.spin_lift(&lambda).unwrap();
            let (back, res) = rep.lorentz_of(&h).unwrap();
            prop_assert!(res < 1e-9);
            prop_assert!((back - &lambda).norm() < 1e-9 * lambda.norm());
            let hxh = krein_adjoint(&h, rep.krein()).unwrap() * &h;
            prop_assert!(fro(&(hxh - identity(4))) < 1e-9);
            let jh = rep.real().conjugate(&h).unwrap();
            prop_assert!(fro(&(jh - &h)) < 1e-9 * fro(&h));
            prop_assert!(fro(&linalg::commutator(&h, rep.chi())) < 1e-9 * fro(&h));
        }

        #[test]
        fn spin_lift_is_multiplicative_up_to_sign(a in arb_lorentz(4), b in arb_lorentz(4)) {
            let rep = build_clifford(4).unwrap();
            let ha = rep.spin_lift(&a).unwrap();
            let hb = rep.spin_lift(&b).unwrap();
            let hab = rep.spin_lift(&(&a * &b)).unwrap();
            let prod = ha * hb;
            let err = fro(&(&prod - &hab)).min(fro(&(&prod + &hab)));
            prop_assert!(err < 1e-8 * fro(&prod));
        }

        #[test]
        fn vector_part_inverts_vector(v in proptest::collection::vec(-3.0f64..3.0, 6)) {
            let rep = build_clifford(6).unwrap();
            let (coeffs, res) = rep.vector_part(&rep.vector(&v));
            prop_assert!(res < 1e-12);
            for (x, y) in coeffs.iter().zip(&v) {
                prop_assert!((x - c(*y, 0.0)).norm() < 1e-12);
            }
        }

        #[test]
        fn future_cone_is_convex(
            u in proptest::collection::vec(-1.0f64..1.0, 3),
            v in proptest::collection::vec(-1.0f64..1.0, 3),
            s in 0.1f64..2.0, t in 0.1f64..2.0
        ) {
            let rep = build_clifford(4).unwrap();
            let nu: f64 = u.iter().map(|x| x * x).sum::<f64>().sqrt();
            let nv: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            let a = [nu + s, u[0], u[1], u[2]];
            let b = [nv + t, v[0], v[1], v[2]];
            prop_assert!(rep.is_future_timelike(&a) && rep.is_future_timelike(&b));
            let sum: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
            prop_assert!(rep.is_future_timelike(&sum));
        }

        #[test]
        fn axial_decomposition_roundtrip(v in proptest::collection::vec(-2.0f64..2.0, 4), w in proptest::collection::vec(-2.0f64..2.0, 4)) {
            let rep = build_clifford(4).unwrap();
            let (a, b, res) = rep.axial_decomposition(&rep.vector_axial(&v, &w));
            prop_assert!(res < 1e-12);
            for k in 0..4 {
                prop_assert!((a[k] - c(v[k], 0.0)).norm() < 1e-12);
                prop_assert!((b[k] - c(w[k], 0.0)).norm() < 1e-12);
            }
        }
    }
}
