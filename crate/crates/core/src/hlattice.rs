//! Hurwitz lattices in `H^m`.
//!
//! A lattice is stored as an exact skeleton: `m` module generators
//! `b_1, .., b_m` with rational quaternion entries, a positive rational
//! squared weight `w_t` for every quaternionic coordinate, and one global
//! extended-precision scale `s`. A skeleton point `x = Σ λ_t b_t` with
//! `λ_t ∈ W` sits at
//!
//! ```text
//! (s √w_1 x_1, .., s √w_m x_m) ∈ H^m = R^{4m}.
//! ```
//!
//! Weights commute with left multiplication, so the point set is a left
//! `W`-module, and squared lengths before the global scale are exact
//! rationals `Σ w_t |x_t|²`. Irrational normalizations (square roots of
//! rational minima, `m`-th roots of products) all end up in `s`.

use std::fmt;
use std::path::Path;

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bounds::ball_volume_value;
use crate::error::{Error, Result};
use crate::linalg::{self, RationalMatrix};
use crate::quat::{format_rational, parse_rational, HurwitzInteger, Quaternion};
use crate::real::{Precision, Real};

/// Doubled coordinates of the Z-basis `{1, i, j, ω}` of `W`.
pub const Z_BASIS: [[i64; 4]; 4] = [[2, 0, 0, 0], [0, 2, 0, 0], [0, 0, 2, 0], [1, 1, 1, 1]];

pub fn z_basis() -> [Quaternion; 4] {
    Z_BASIS.map(|[a, b, c, d]| Quaternion::from_halves(a, b, c, d))
}

/// `λ · v`, componentwise left multiplication.
pub fn left_mul(lambda: &Quaternion, v: &[Quaternion]) -> Vec<Quaternion> {
    v.iter().map(|x| lambda * x).collect()
}

/// The real coordinates of a quaternionic vector, 4 per entry.
pub fn embed(v: &[Quaternion]) -> Vec<BigRational> {
    v.iter().flat_map(|x| x.components().map(Clone::clone)).collect()
}

#[derive(Clone)]
pub struct HurwitzLattice {
    m: usize,
    basis: Vec<Vec<Quaternion>>,
    weights: Vec<BigRational>,
    scale: Real,
    comment: Option<String>,
}

/// A lattice point, with exact coordinates before weights and scale.
#[derive(Clone, PartialEq, Eq)]
pub struct LatticeVector {
    /// Coefficients with respect to the module basis.
    pub coeffs: Vec<HurwitzInteger>,
    /// Coordinates with respect to the Z-basis `ω_s b_t`, index `4t + s`.
    pub z: Vec<i64>,
    /// Skeleton coordinates `Σ coeffs_t b_t`.
    pub ambient: Vec<Quaternion>,
    /// `Σ w_t |ambient_t|²`, the squared length before the global scale.
    pub norm_sq: BigRational,
}

impl fmt::Debug for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LatticeVector(z = {:?}, norm_sq = {})", self.z, self.norm_sq)
    }
}

impl LatticeVector {
    pub fn is_zero(&self) -> bool {
        self.z.iter().all(|&c| c == 0)
    }
}

fn weighted_norm(v: &[Quaternion], weights: &[BigRational]) -> BigRational {
    v.iter().zip(weights).map(|(x, w)| w * x.norm()).sum()
}

impl HurwitzLattice {
    /// Builds and validates a lattice: `m` generators of length `m`,
    /// positive weights and scale, and full real rank `4m`.
    pub fn new(
        basis: Vec<Vec<Quaternion>>,
        weights: Vec<BigRational>,
        scale: Real,
    ) -> Result<Self> {
        let m = basis.len();
        if m == 0 {
            return Err(Error::InvalidArgument("lattice rank must be positive".into()));
        }
        if let Some(row) = basis.iter().find(|r| r.len() != m) {
            return Err(Error::InvalidArgument(format!(
                "basis vector has {} coordinates, expected {m}",
                row.len()
            )));
        }
        if weights.len() != m {
            return Err(Error::InvalidArgument(format!("{} weights for rank {m}", weights.len())));
        }
        if weights.iter().any(|w| !w.is_positive()) {
            return Err(Error::InvalidArgument("coordinate weights must be positive".into()));
        }
        if !scale.is_positive() {
            return Err(Error::InvalidArgument("scale must be positive".into()));
        }
        let lattice = HurwitzLattice { m, basis, weights, scale, comment: None };
        let rank = linalg::rank(&lattice.skeleton_matrix());
        if rank != 4 * m {
            return Err(Error::DegenerateLattice(format!(
                "the W-translates of the basis span a space of real dimension {rank}, expected {}",
                4 * m
            )));
        }
        Ok(lattice)
    }

    /// Unit weights and unit scale.
    pub fn from_basis(basis: Vec<Vec<Quaternion>>, prec: Precision) -> Result<Self> {
        let m = basis.len();
        HurwitzLattice::new(basis, vec![BigRational::one(); m], Real::one(prec))
    }

    /// `W^m` with its standard basis.
    pub fn standard(m: usize, prec: Precision) -> Result<Self> {
        let basis = (0..m)
            .map(|t| (0..m).map(|u| if t == u { Quaternion::one() } else { Quaternion::zero() }).collect())
            .collect();
        HurwitzLattice::from_basis(basis, prec)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn dimension(&self) -> usize {
        4 * self.m
    }

    pub fn basis(&self) -> &[Vec<Quaternion>] {
        &self.basis
    }

    pub fn weights(&self) -> &[BigRational] {
        &self.weights
    }

    pub fn scale(&self) -> &Real {
        &self.scale
    }

    pub fn precision(&self) -> Precision {
        self.scale.precision()
    }

    pub fn comment(&self) -> Option<&str> {
        self.comment.as_deref()
    }

    pub fn with_comment(mut self, comment: impl Into<String>) -> Self {
        self.comment = Some(comment.into());
        self
    }

    /// Same skeleton, new global scale.
    pub fn with_scale(&self, scale: Real) -> Result<Self> {
        if !scale.is_positive() {
            return Err(Error::InvalidArgument("scale must be positive".into()));
        }
        Ok(HurwitzLattice { scale, ..self.clone() })
    }

    /// `c·L` for a positive rational `c`, applied to the skeleton.
    pub fn scaled(&self, c: &BigRational) -> Result<Self> {
        if !c.is_positive() {
            return Err(Error::InvalidArgument("scaling factor must be positive".into()));
        }
        let basis = self.basis.iter().map(|row| row.iter().map(|x| x.scale(c)).collect()).collect();
        Ok(HurwitzLattice { basis, ..self.clone() })
    }

    /// Same skeleton with the scale chosen so that the determinant is 1.
    pub fn normalized(&self) -> Self {
        let prec = self.precision();
        let d = Real::from_rational(&self.exact_determinant(), prec);
        HurwitzLattice { scale: d.root(4 * self.m as u32).recip(), ..self.clone() }
    }

    /// A random lattice whose basis entries are Hurwitz integers with
    /// coordinates of absolute value at most `height`.
    pub fn random<R: Rng + ?Sized>(m: usize, height: i64, rng: &mut R, prec: Precision) -> Result<Self> {
        if m == 0 || height < 1 {
            return Err(Error::InvalidArgument(format!("random lattice needs m >= 1 and height >= 1, got {m}, {height}")));
        }
        loop {
            let basis: Vec<Vec<Quaternion>> = (0..m)
                .map(|_| (0..m).map(|_| random_hurwitz(height, rng).to_quaternion()).collect())
                .collect();
            match HurwitzLattice::from_basis(basis, prec) {
                Ok(l) => return Ok(l),
                Err(Error::DegenerateLattice(_)) => continue,
                Err(e) => return Err(e),
            }
        }
    }

    /// The Z-basis vector `ω_s b_t`, `p = 4t + s`.
    pub fn z_generator(&self, p: usize) -> Vec<Quaternion> {
        let omega = &z_basis()[p % 4];
        left_mul(omega, &self.basis[p / 4])
    }

    /// Rows are the real coordinates of `ω_s b_t`, without weights or scale.
    pub fn skeleton_matrix(&self) -> RationalMatrix {
        (0..4 * self.m).map(|p| embed(&self.z_generator(p))).collect()
    }

    /// Exact Gram matrix of the Z-basis before the global scale.
    pub fn gram(&self) -> RationalMatrix {
        let n = 4 * self.m;
        let gens: Vec<Vec<Quaternion>> = (0..n).map(|p| self.z_generator(p)).collect();
        let mut g = vec![vec![BigRational::zero(); n]; n];
        for p in 0..n {
            for q in p..n {
                let v: BigRational = gens[p]
                    .iter()
                    .zip(&gens[q])
                    .zip(&self.weights)
                    .map(|((x, y), w)| w * x.dot(y))
                    .sum();
                g[q][p] = v.clone();
                g[p][q] = v;
            }
        }
        g
    }

    /// The `4m × 4m` real basis matrix; column `p` is the embedding of `ω_s b_t`.
    pub fn real_basis(&self) -> Vec<Vec<Real>> {
        let prec = self.precision();
        let roots: Vec<Real> =
            self.weights.iter().map(|w| Real::from_rational(w, prec).sqrt()).collect();
        let skel = self.skeleton_matrix();
        let n = 4 * self.m;
        (0..n)
            .map(|i| {
                let f = &roots[i / 4] * &self.scale;
                (0..n).map(|p| &Real::from_rational(&skel[p][i], prec) * &f).collect()
            })
            .collect()
    }

    /// `det` before the global scale, an exact rational:
    /// `|det(skeleton)| · ∏ w_t²`.
    pub fn exact_determinant(&self) -> BigRational {
        let d = linalg::determinant(&self.skeleton_matrix()).abs();
        self.weights.iter().fold(d, |acc, w| acc * w * w)
    }

    /// Covolume in `R^{4m}`.
    pub fn determinant(&self) -> Real {
        let prec = self.precision();
        &Real::from_rational(&self.exact_determinant(), prec) * &self.scale.powi(4 * self.m as u32)
    }

    /// Builds the lattice point with the given Z-coordinates.
    pub fn vector_from_z(&self, z: &[i64]) -> Result<LatticeVector> {
        if z.len() != 4 * self.m {
            return Err(Error::InvalidArgument(format!(
                "{} Z-coordinates for a lattice of real dimension {}",
                z.len(),
                4 * self.m
            )));
        }
        let coeffs: Vec<HurwitzInteger> =
            z.chunks(4).map(|c| HurwitzInteger::from_z([c[0], c[1], c[2], c[3]])).collect();
        Ok(self.assemble(coeffs, z.to_vec()))
    }

    /// Builds the lattice point `Σ coeffs_t b_t`.
    pub fn vector_from_coeffs(&self, coeffs: &[HurwitzInteger]) -> Result<LatticeVector> {
        if coeffs.len() != self.m {
            return Err(Error::InvalidArgument(format!(
                "{} coefficients for a lattice of rank {}",
                coeffs.len(),
                self.m
            )));
        }
        let z = coeffs.iter().flat_map(|c| c.z_coords()).collect();
        Ok(self.assemble(coeffs.to_vec(), z))
    }

    fn assemble(&self, coeffs: Vec<HurwitzInteger>, z: Vec<i64>) -> LatticeVector {
        let mut ambient = vec![Quaternion::zero(); self.m];
        for (c, row) in coeffs.iter().zip(&self.basis) {
            if c.is_zero() {
                continue;
            }
            let cq = c.to_quaternion();
            for (a, x) in ambient.iter_mut().zip(row) {
                *a = &*a + &(&cq * x);
            }
        }
        let norm_sq = weighted_norm(&ambient, &self.weights);
        LatticeVector { coeffs, z, ambient, norm_sq }
    }

    /// `λ v` for a Hurwitz integer `λ`; again a lattice point.
    pub fn unit_action(&self, lambda: &HurwitzInteger, v: &LatticeVector) -> LatticeVector {
        let coeffs: Vec<HurwitzInteger> = v.coeffs.iter().map(|c| *lambda * *c).collect();
        let z = coeffs.iter().flat_map(|c| c.z_coords()).collect();
        self.assemble(coeffs, z)
    }

    /// Euclidean length of `v` in `R^{4m}`.
    pub fn length(&self, v: &LatticeVector) -> Real {
        let prec = self.precision();
        &Real::from_rational(&v.norm_sq, prec).sqrt() * &self.scale
    }

    /// Real coordinates of `v` in `R^{4m}` as doubles.
    pub fn ambient_f64(&self, v: &LatticeVector) -> Vec<f64> {
        let s = self.scale.to_f64();
        v.ambient
            .iter()
            .zip(&self.weights)
            .flat_map(|(x, w)| {
                let f = s * crate::real::rational_to_f64(w).sqrt();
                x.to_f64().map(|c| c * f)
            })
            .collect()
    }

    /// Adds `λ · b_source` to `b_target`.
    pub fn add_row_multiple(
        &self,
        target: usize,
        source: usize,
        lambda: &HurwitzInteger,
    ) -> Result<Self> {
        if target >= self.m || source >= self.m || target == source {
            return Err(Error::InvalidArgument(format!(
                "row operation {target} += λ·{source} invalid for rank {}",
                self.m
            )));
        }
        let mut basis = self.basis.clone();
        let add = left_mul(&lambda.to_quaternion(), &self.basis[source]);
        for (x, y) in basis[target].iter_mut().zip(add) {
            *x = &*x + &y;
        }
        Ok(HurwitzLattice { basis, ..self.clone() })
    }

    pub fn swap_rows(&self, a: usize, b: usize) -> Result<Self> {
        if a >= self.m || b >= self.m {
            return Err(Error::InvalidArgument(format!("row swap {a} <-> {b} invalid for rank {}", self.m)));
        }
        let mut basis = self.basis.clone();
        basis.swap(a, b);
        Ok(HurwitzLattice { basis, ..self.clone() })
    }

    /// Packing density `||Λ||^{4m} V_{4m} / (2^{4m} det Λ)`.
    pub fn density(&self, min_norm: &Real) -> Result<Real> {
        density(4 * self.m as u32, min_norm, &self.determinant())
    }

    pub fn load(path: impl AsRef<Path>, prec: Precision) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        HurwitzLattice::from_json(&text, prec)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }

    pub fn from_json(text: &str, prec: Precision) -> Result<Self> {
        let doc: LatticeDocument =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        doc.into_lattice(prec)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&LatticeDocument::from_lattice(self))
            .expect("lattice documents always serialize");
        s.push('\n');
        s
    }
}

impl fmt::Debug for HurwitzLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HurwitzLattice")
            .field("m", &self.m)
            .field("basis", &self.basis)
            .field("weights", &self.weights.iter().map(format_rational).collect::<Vec<_>>())
            .field("scale", &self.scale)
            .finish()
    }
}

/// `r^n V_n / (2^n det)`.
pub fn density(n: u32, min_norm: &Real, det: &Real) -> Result<Real> {
    if !min_norm.is_positive() || !det.is_positive() {
        return Err(Error::InvalidArgument("density needs a positive minimum and determinant".into()));
    }
    let prec = min_norm.precision();
    let v = ball_volume_value(n, prec)?;
    let two_n = Real::from_i64(2, prec).powi(n);
    Ok(&(&min_norm.powi(n) * &v) / &(&two_n * det))
}

/// Content (gcd) of the Z-coordinates is 1.
pub fn is_primitive(v: &LatticeVector) -> Result<bool> {
    primitive_z(&v.z)
}

pub fn primitive_z(z: &[i64]) -> Result<bool> {
    let g = z.iter().fold(0i64, |acc, &c| acc.gcd(&c));
    if g == 0 {
        return Err(Error::ZeroVector);
    }
    Ok(g == 1)
}

/// A Hurwitz integer with all coordinates in `[-height, height]`.
pub fn random_hurwitz<R: Rng + ?Sized>(height: i64, rng: &mut R) -> HurwitzInteger {
    let twice = if rng.gen::<bool>() {
        std::array::from_fn(|_| 2 * rng.gen_range(-height..=height))
    } else {
        std::array::from_fn(|_| 2 * rng.gen_range(-height..height) + 1)
    };
    HurwitzInteger::from_twice(twice).expect("uniform parity")
}

/// Digits used when writing the global scale.
pub const SCALE_DIGITS: usize = 45;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct LatticeDocument {
    pub m: usize,
    pub basis: Vec<Vec<Quaternion>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comment: Option<String>,
}

impl LatticeDocument {
    pub fn from_lattice(l: &HurwitzLattice) -> Self {
        let weights = (!l.weights.iter().all(One::is_one))
            .then(|| l.weights.iter().map(format_rational).collect());
        let scale = (l.scale != Real::one(l.precision())).then(|| l.scale.to_decimal(SCALE_DIGITS));
        LatticeDocument { m: l.m, basis: l.basis.clone(), weights, scale, comment: l.comment.clone() }
    }

    pub fn into_lattice(self, prec: Precision) -> Result<HurwitzLattice> {
        if self.basis.len() != self.m {
            return Err(Error::Parse(format!(
                "document declares m = {} but lists {} basis vectors",
                self.m,
                self.basis.len()
            )));
        }
        let weights = match self.weights {
            Some(ws) => ws.iter().map(|w| parse_rational(w)).collect::<Result<Vec<_>>>()?,
            None => vec![BigRational::one(); self.m],
        };
        let scale = match &self.scale {
            Some(s) => Real::parse_decimal(s, prec)?,
            None => Real::one(prec),
        };
        let mut l = HurwitzLattice::new(self.basis, weights, scale)?;
        l.comment = self.comment;
        Ok(l)
    }
}

/// Z-coordinates of `v` in the module basis, if `v` (skeleton coordinates)
/// is a lattice point.
pub fn z_coordinates_of(l: &HurwitzLattice, v: &[Quaternion]) -> Option<Vec<i64>> {
    let skel = l.skeleton_matrix();
    let n = 4 * l.m;
    // Solve z · skel = embed(v) by exact elimination on the transpose.
    let target = embed(v);
    let mut aug: RationalMatrix = (0..n)
        .map(|i| {
            let mut row: Vec<BigRational> = (0..n).map(|p| skel[p][i].clone()).collect();
            row.push(target[i].clone());
            row
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !aug[r][col].is_zero())?;
        aug.swap(col, pivot);
        let inv = aug[col][col].recip();
        for c in col..=n {
            aug[col][c] = &aug[col][c] * &inv;
        }
        for r in 0..n {
            if r != col && !aug[r][col].is_zero() {
                let f = aug[r][col].clone();
                for c in col..=n {
                    let sub = &f * &aug[col][c];
                    aug[r][c] = &aug[r][c] - &sub;
                }
            }
        }
    }
    aug.iter()
        .map(|row| {
            let x = &row[n];
            if x.is_integer() {
                i64::try_from(x.to_integer()).ok()
            } else {
                None
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p() -> Precision {
        Precision::default()
    }

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn hurwitz_order_has_covolume_one_half() {
        let w = HurwitzLattice::standard(1, p()).unwrap();
        assert_eq!(w.exact_determinant(), r(1, 2));
        let w2 = HurwitzLattice::standard(2, p()).unwrap();
        assert_eq!(w2.exact_determinant(), r(1, 4));
        // Independent oracle: cofactor expansion of the 8×8 skeleton.
        assert_eq!(linalg::determinant_by_expansion(&w2.skeleton_matrix()).abs(), r(1, 4));
        for m in 1..=4 {
            let wm = HurwitzLattice::standard(m, p()).unwrap();
            assert_eq!(wm.exact_determinant(), r(1, 1 << m));
        }
    }

    #[test]
    fn real_basis_determinant_matches() {
        let w = HurwitzLattice::standard(1, p()).unwrap();
        let rb = w.real_basis();
        let q: RationalMatrix = rb.iter().map(|row| row.iter().map(Real::to_rational).collect()).collect();
        assert_eq!(linalg::determinant(&q).abs(), r(1, 2));
    }

    #[test]
    fn determinant_is_homogeneous() {
        let w2 = HurwitzLattice::standard(2, p()).unwrap();
        let c = r(3, 2);
        let scaled = w2.scaled(&c).unwrap();
        let c8 = (0..8).fold(BigRational::one(), |acc, _| acc * &c);
        assert_eq!(scaled.exact_determinant(), w2.exact_determinant() * c8);
        let s = w2.with_scale(Real::from_f64(1.5, p())).unwrap();
        assert!(s.determinant().relative_diff(&scaled.determinant()) < 1e-36);
    }

    #[test]
    fn weights_enter_the_determinant_squared() {
        let basis = HurwitzLattice::standard(2, p()).unwrap().basis().to_vec();
        let l = HurwitzLattice::new(basis, vec![r(2, 1), r(1, 3)], Real::one(p())).unwrap();
        assert_eq!(l.exact_determinant(), r(1, 4) * r(4, 1) * r(1, 9));
        let g = linalg::determinant(&l.gram());
        assert_eq!(g, l.exact_determinant() * l.exact_determinant());
    }

    #[test]
    fn dependent_basis_is_rejected() {
        let v1 = vec![Quaternion::from_ints(1, 2, 0, 0), Quaternion::from_halves(1, 1, 1, 1)];
        let v2 = left_mul(&Quaternion::omega(), &v1);
        let err = HurwitzLattice::from_basis(vec![v1, v2], p()).unwrap_err();
        assert!(matches!(err, Error::DegenerateLattice(_)));
    }

    #[test]
    fn shape_errors() {
        let bad = vec![vec![Quaternion::one()], vec![Quaternion::one(), Quaternion::zero()]];
        assert!(HurwitzLattice::from_basis(bad, p()).is_err());
        assert!(HurwitzLattice::from_basis(vec![], p()).is_err());
        let w = HurwitzLattice::standard(1, p()).unwrap();
        assert!(w.with_scale(Real::zero(p())).is_err());
        assert!(w.scaled(&r(-1, 2)).is_err());
    }

    #[test]
    fn lattice_vectors_and_primitivity() {
        let w2 = HurwitzLattice::standard(2, p()).unwrap();
        let e = w2.vector_from_z(&[1, 0, 0, 0, 0, 0, 0, 0]).unwrap();
        assert!(is_primitive(&e).unwrap());
        let two_e = w2.vector_from_z(&[2, 0, 0, 0, 0, 0, 0, 0]).unwrap();
        assert!(!is_primitive(&two_e).unwrap());
        let zero = w2.vector_from_z(&[0; 8]).unwrap();
        assert!(matches!(is_primitive(&zero), Err(Error::ZeroVector)));
        let v = w2.vector_from_z(&[1, -2, 0, 3, 0, 1, 1, 0]).unwrap();
        assert!(is_primitive(&v).unwrap());
        for u in HurwitzInteger::units() {
            let uv = w2.unit_action(&u, &v);
            assert!(is_primitive(&uv).unwrap());
            assert_eq!(uv.norm_sq, v.norm_sq);
            // Brute-force divisibility: no t in 2..=10 with uv/t a lattice point.
            for t in 2..=10i64 {
                let q: Vec<Quaternion> =
                    uv.ambient.iter().map(|x| x.scale(&r(1, t))).collect();
                assert!(z_coordinates_of(&w2, &q).is_none());
            }
        }
    }

    #[test]
    fn z_and_coefficient_views_agree() {
        let l = HurwitzLattice::from_basis(
            vec![
                vec![Quaternion::from_ints(1, 1, 0, 0), Quaternion::from_halves(1, -1, 1, 3)],
                vec![Quaternion::from_ints(0, 0, 2, 1), Quaternion::from_ints(1, 0, 0, 0)],
            ],
            p(),
        )
        .unwrap();
        let z = [3, -1, 0, 2, 1, 1, -2, 1];
        let v = l.vector_from_z(&z).unwrap();
        let w = l.vector_from_coeffs(&v.coeffs).unwrap();
        assert_eq!(v, w);
        assert_eq!(z_coordinates_of(&l, &v.ambient).unwrap(), z.to_vec());
        // Z-form: Σ z_p (ω_s b_t) equals the module form.
        let mut acc = vec![Quaternion::zero(); 2];
        for (pidx, &c) in z.iter().enumerate() {
            for (a, g) in acc.iter_mut().zip(l.z_generator(pidx)) {
                *a = &*a + &g.scale(&BigRational::from_integer(c.into()));
            }
        }
        assert_eq!(acc, v.ambient);
        let g = l.gram();
        let quad: BigRational = (0..8)
            .flat_map(|a| (0..8).map(move |b| (a, b)))
            .map(|(a, b)| &g[a][b] * BigRational::from_integer((z[a] * z[b]).into()))
            .sum();
        assert_eq!(quad, v.norm_sq);
    }

    #[test]
    fn densities_of_standard_lattices() {
        let one = Real::one(p());
        let w = HurwitzLattice::standard(1, p()).unwrap();
        let d = w.density(&one).unwrap();
        let pi = Real::pi(p());
        let expect = &(&pi * &pi) / &Real::from_i64(16, p());
        assert!(d.relative_diff(&expect) < 1e-36);
        assert!((d.to_f64() - 0.616_850_275_068_084_9).abs() < 1e-15);
        let w2 = HurwitzLattice::standard(2, p()).unwrap();
        let d2 = w2.density(&one).unwrap();
        assert!((d2.to_f64() - 0.063_417_376_975_262).abs() < 1e-15);
        assert!(w.density(&Real::zero(p())).is_err());
    }

    #[test]
    fn density_is_scale_invariant() {
        let w2 = HurwitzLattice::standard(2, p()).unwrap();
        let c = Real::from_f64(1.75, p());
        let scaled = w2.with_scale(c.clone()).unwrap();
        let a = w2.density(&Real::one(p())).unwrap();
        let b = scaled.density(&c).unwrap();
        assert!(a.relative_diff(&b) < 1e-36);
    }

    #[test]
    fn document_round_trip() {
        let text = r#"{
  "m": 2,
  "basis": [
    [["1", "0", "0", "0"], ["1/2", "1/2", "1/2", "1/2"]],
    [["0", "0", "0", "0"], ["2", "0", "0", "0"]]
  ],
  "comment": "fixture"
}"#;
        let l = HurwitzLattice::from_json(text, p()).unwrap();
        assert_eq!(l.m(), 2);
        assert_eq!(l.comment(), Some("fixture"));
        let out = l.to_json();
        let back = HurwitzLattice::from_json(&out, p()).unwrap();
        assert_eq!(back.basis(), l.basis());
        assert_eq!(back.to_json(), out);
        let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
        let orig: serde_json::Value = serde_json::from_str(text).unwrap();
        assert_eq!(doc, orig);
    }

    #[test]
    fn document_with_scale_and_weights() {
        let basis = HurwitzLattice::standard(2, p()).unwrap().basis().to_vec();
        let l = HurwitzLattice::new(basis, vec![r(32, 1), BigRational::one()], Real::from_f64(0.75, p()))
            .unwrap();
        let back = HurwitzLattice::from_json(&l.to_json(), p()).unwrap();
        assert_eq!(back.weights(), l.weights());
        assert!(back.scale() == l.scale());
        let irr = l.with_scale(Real::from_i64(2, p()).sqrt()).unwrap();
        let back = HurwitzLattice::from_json(&irr.to_json(), p()).unwrap();
        assert!(back.scale().relative_diff(irr.scale()) < 1e-44);
    }

    #[test]
    fn malformed_documents() {
        let bad_rational = r#"{"m": 1, "basis": [[["1/0", "0", "0", "0"]]]}"#;
        assert!(matches!(HurwitzLattice::from_json(bad_rational, p()), Err(Error::Parse(_))));
        let bad_shape = r#"{"m": 2, "basis": [[["1", "0", "0", "0"]]]}"#;
        assert!(HurwitzLattice::from_json(bad_shape, p()).is_err());
        let dependent = r#"{"m": 2, "basis": [
            [["1", "0", "0", "0"], ["1", "0", "0", "0"]],
            [["1/2", "1/2", "1/2", "1/2"], ["1/2", "1/2", "1/2", "1/2"]]]}"#;
        assert!(matches!(
            HurwitzLattice::from_json(dependent, p()),
            Err(Error::DegenerateLattice(_))
        ));
        // General rational entries are accepted.
        let general = r#"{"m": 1, "basis": [[["1/3", "2/7", "0", "0"]]]}"#;
        assert!(HurwitzLattice::from_json(general, p()).is_ok());
    }

    fn hurwitz() -> impl Strategy<Value = HurwitzInteger> {
        (prop::array::uniform4(-3i64..4), any::<bool>()).prop_map(|(c, half)| {
            let t = c.map(|x| 2 * x + half as i64);
            HurwitzInteger::from_twice(t).unwrap()
        })
    }

    proptest! {
        #[test]
        fn row_operations_keep_the_determinant(
            ops in prop::collection::vec((0usize..3, 1usize..3, hurwitz()), 1..6)
        ) {
            let mut l = HurwitzLattice::standard(3, p()).unwrap();
            let d0 = l.exact_determinant();
            for (t, shift, lambda) in ops {
                let s = (t + shift) % 3;
                l = l.add_row_multiple(t, s, &lambda).unwrap();
            }
            prop_assert_eq!(l.exact_determinant(), d0);
        }

        #[test]
        fn unit_action_preserves_norm(z in prop::collection::vec(-4i64..5, 8), u in 0usize..24) {
            let l = HurwitzLattice::from_basis(vec![
                vec![Quaternion::from_ints(2, 1, 0, 0), Quaternion::from_halves(1, 1, -1, 1)],
                vec![Quaternion::from_ints(0, 1, 1, 0), Quaternion::from_ints(3, 0, 0, 0)],
            ], p()).unwrap();
            let v = l.vector_from_z(&z).unwrap();
            let unit = HurwitzInteger::units()[u];
            let w = l.unit_action(&unit, &v);
            prop_assert_eq!(&w.norm_sq, &v.norm_sq);
            let expect = left_mul(&unit.to_quaternion(), &v.ambient);
            prop_assert_eq!(w.ambient, expect);
        }
    }
}
