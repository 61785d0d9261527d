//! Short-vector enumeration and quaternionic successive minima.
//!
//! Enumeration is Fincke–Pohst on the `4m`-dimensional Z-basis: a floating
//! Cholesky factor of the exact Gram matrix bounds each coordinate range,
//! and every candidate surviving the floating test (with slack `1 + 2^-30`)
//! is re-checked exactly on the integer-scaled Gram matrix.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::bounds::ball_volume_value;
use crate::error::{Error, Result};
use crate::hlattice::{embed, left_mul, HurwitzLattice, LatticeVector};
use crate::linalg;
use crate::quat::Quaternion;
use crate::real::{rational_to_f64, Real};

pub const DEFAULT_CAPACITY: usize = 10_000_000;

const FLOAT_SLACK: f64 = 1.0 + 1.0 / (1u64 << 30) as f64;

/// Pre-computed data for repeated enumeration on one lattice.
pub struct Enumerator {
    n: usize,
    gram: Vec<Vec<BigRational>>,
    gram_int: Vec<Vec<BigInt>>,
    gram_small: Option<Vec<Vec<i64>>>,
    denom: BigInt,
    q_diag: Vec<f64>,
    mu: Vec<Vec<f64>>,
    capacity: usize,
}

/// A raw enumeration hit: Z-coordinates and the exact squared length
/// before scale.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShortVector {
    pub z: Vec<i64>,
    pub norm_sq: BigRational,
}

impl Enumerator {
    pub fn new(lattice: &HurwitzLattice, capacity: usize) -> Result<Self> {
        let gram = lattice.gram();
        let n = gram.len();
        let denom = gram
            .iter()
            .flatten()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let gram_int: Vec<Vec<BigInt>> = gram
            .iter()
            .map(|row| row.iter().map(|x| (x * &denom).to_integer()).collect())
            .collect();
        let bound = 1i64 << 40;
        let gram_small = gram_int
            .iter()
            .map(|row| row.iter().map(|x| x.to_i64().filter(|v| v.abs() < bound)).collect::<Option<Vec<_>>>())
            .collect::<Option<Vec<_>>>();
        let gf: Vec<Vec<f64>> = gram.iter().map(|row| row.iter().map(rational_to_f64).collect()).collect();
        let (q_diag, mu) = cholesky(&gf)?;
        Ok(Enumerator { n, gram, gram_int, gram_small, denom, q_diag, mu, capacity })
    }

    pub fn gram(&self) -> &[Vec<BigRational>] {
        &self.gram
    }

    /// `z^T G z` as an exact rational.
    pub fn norm_sq(&self, z: &[i64]) -> BigRational {
        BigRational::new(self.quad_int(z), self.denom.clone())
    }

    fn quad_int(&self, z: &[i64]) -> BigInt {
        if let Some(g) = &self.gram_small {
            if let Some(v) = quad_i128(g, z) {
                return BigInt::from(v);
            }
        }
        let mut acc = BigInt::zero();
        for (a, row) in self.gram_int.iter().enumerate() {
            if z[a] == 0 {
                continue;
            }
            let mut inner = BigInt::zero();
            for (b, g) in row.iter().enumerate() {
                if z[b] != 0 {
                    inner += g * z[b];
                }
            }
            acc += inner * z[a];
        }
        acc
    }

    /// All nonzero `z` with `z^T G z <= radius_sq`, sorted by
    /// `(norm_sq, z)`.
    pub fn enumerate(&self, radius_sq: &BigRational) -> Result<Vec<ShortVector>> {
        if !radius_sq.is_positive() {
            return Ok(Vec::new());
        }
        let limit_num = radius_sq.numer() * &self.denom;
        let limit_den = radius_sq.denom().clone();
        let a = rational_to_f64(radius_sq) * FLOAT_SLACK + f64::EPSILON;
        let n = self.n;
        let mut out: Vec<ShortVector> = Vec::new();
        let mut z = vec![0i64; n];
        let mut partial = vec![0.0f64; n + 1];
        // Depth-first over coordinates n-1 .. 0.
        let mut centers = vec![0.0f64; n];
        let mut upper = vec![0i64; n];
        let mut level = n;
        let mut descending = true;
        loop {
            if descending {
                if level == 0 {
                    if z.iter().any(|&c| c != 0) {
                        let val = self.quad_int(&z);
                        if val.clone() * &limit_den <= limit_num {
                            out.push(ShortVector { z: z.clone(), norm_sq: BigRational::new(val, self.denom.clone()) });
                            if out.len() > self.capacity {
                                return Err(Error::Capacity { cap: self.capacity });
                            }
                        }
                    }
                    descending = false;
                    continue;
                }
                let i = level - 1;
                let c: f64 = -(i + 1..n).map(|j| self.mu[j][i] * z[j] as f64).sum::<f64>();
                let rem = a - partial[level];
                if rem < 0.0 {
                    descending = false;
                    continue;
                }
                let half_width = (rem / self.q_diag[i]).sqrt();
                let lo = (c - half_width).ceil() as i64;
                let hi = (c + half_width).floor() as i64;
                if lo > hi {
                    descending = false;
                    continue;
                }
                centers[i] = c;
                upper[i] = hi;
                z[i] = lo;
                let d = z[i] as f64 - c;
                partial[i] = partial[level] + self.q_diag[i] * d * d;
                level = i;
            } else {
                // Advance the coordinate at `level`, or climb.
                if level == n {
                    break;
                }
                let i = level;
                if z[i] < upper[i] {
                    z[i] += 1;
                    let d = z[i] as f64 - centers[i];
                    partial[i] = partial[i + 1] + self.q_diag[i] * d * d;
                    descending = true;
                } else {
                    z[i] = 0;
                    level += 1;
                }
            }
        }
        out.sort_by(|x, y| x.norm_sq.cmp(&y.norm_sq).then_with(|| x.z.cmp(&y.z)));
        Ok(out)
    }
}

fn quad_i128(g: &[Vec<i64>], z: &[i64]) -> Option<i128> {
    let mut acc: i128 = 0;
    for (a, row) in g.iter().enumerate() {
        if z[a] == 0 {
            continue;
        }
        let mut inner: i128 = 0;
        for (b, &gv) in row.iter().enumerate() {
            inner = inner.checked_add((gv as i128).checked_mul(z[b] as i128)?)?;
        }
        acc = acc.checked_add(inner.checked_mul(z[a] as i128)?)?;
    }
    Some(acc)
}

/// `G = R^T R` in the Fincke–Pohst form: `q_ii = r_ii²`, `μ_ji = r_ij / r_ii`
/// (stored at `mu[j][i]`, `j > i`), so that
/// `z^T G z = Σ_i q_ii (z_i + Σ_{j>i} μ_ji z_j)²`.
fn cholesky(g: &[Vec<f64>]) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let n = g.len();
    let mut q = vec![vec![0.0f64; n]; n];
    for i in 0..n {
        for j in i..n {
            q[i][j] = g[i][j];
        }
    }
    for i in 0..n {
        if !(q[i][i] > 0.0) {
            return Err(Error::DegenerateLattice("Gram matrix is not positive definite in floating point".into()));
        }
        for j in i + 1..n {
            q[j][i] = q[i][j];
            q[i][j] /= q[i][i];
        }
        for k in i + 1..n {
            for l in k..n {
                q[k][l] -= q[k][i] * q[i][l];
            }
        }
    }
    let diag = (0..n).map(|i| q[i][i]).collect();
    let mut mu = vec![vec![0.0f64; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            mu[j][i] = q[i][j];
        }
    }
    Ok((diag, mu))
}

/// Squared radius before scale for a Euclidean radius `radius`.
pub fn pre_scale_radius_sq(lattice: &HurwitzLattice, radius: &Real) -> BigRational {
    let r = radius / lattice.scale();
    let q = r.to_rational();
    &q * &q
}

/// Nonzero lattice vectors of Euclidean length at most `radius`, sorted by
/// `(norm_sq, Z-coordinates)`.
pub fn short_vectors(lattice: &HurwitzLattice, radius: &Real, capacity: usize) -> Result<Vec<LatticeVector>> {
    if !radius.is_positive() {
        return Err(Error::InvalidArgument("enumeration radius must be positive".into()));
    }
    short_vectors_exact(lattice, &pre_scale_radius_sq(lattice, radius), capacity)
}

/// As [`short_vectors`], with an exact squared radius before scale.
pub fn short_vectors_exact(
    lattice: &HurwitzLattice,
    radius_sq: &BigRational,
    capacity: usize,
) -> Result<Vec<LatticeVector>> {
    let e = Enumerator::new(lattice, capacity)?;
    e.enumerate(radius_sq)?
        .into_iter()
        .map(|sv| lattice.vector_from_z(&sv.z))
        .collect()
}

/// The real span of `{λ v : λ ∈ {1, i, j, k}}` has dimension `4 |vs|`.
pub fn h_linearly_independent(vs: &[Vec<Quaternion>]) -> bool {
    if vs.is_empty() {
        return true;
    }
    let units = [Quaternion::one(), Quaternion::i(), Quaternion::j(), Quaternion::k()];
    let rows: Vec<Vec<BigRational>> = vs
        .iter()
        .flat_map(|v| units.iter().map(move |u| embed(&left_mul(u, v))))
        .collect();
    linalg::rank(&rows) == 4 * vs.len()
}

#[derive(Clone, Debug)]
pub struct MinimaReport {
    /// `min_1 <= .. <= min_m`, Euclidean lengths.
    pub minima: Vec<Real>,
    pub witnesses: Vec<LatticeVector>,
    /// Squared lengths of the witnesses before scale.
    pub exact_norms_sq: Vec<BigRational>,
}

impl MinimaReport {
    /// `∏ min_i`.
    pub fn product(&self) -> Real {
        let prec = self.minima[0].precision();
        self.minima.iter().fold(Real::one(prec), |acc, x| &acc * x)
    }
}

/// `2 (det / V_{4m})^{1/(4m)}`, the first enumeration radius.
pub fn initial_radius(lattice: &HurwitzLattice) -> Result<Real> {
    let n = lattice.dimension() as u32;
    let prec = lattice.precision();
    let v = ball_volume_value(n, prec)?;
    Ok(&(lattice.determinant() / v).root(n) * &Real::from_i64(2, prec))
}

/// Quaternionic successive minima by a greedy scan of the sorted
/// enumeration, growing the radius by `2^{1/4}` until `m` H-independent
/// vectors are found.
pub fn quaternionic_minima(lattice: &HurwitzLattice, capacity: usize) -> Result<MinimaReport> {
    let m = lattice.m();
    let prec = lattice.precision();
    let e = Enumerator::new(lattice, capacity)?;
    let growth = Real::from_i64(2, prec).root(4);
    let mut radius = initial_radius(lattice)?;
    loop {
        let rsq = pre_scale_radius_sq(lattice, &radius);
        let found = e.enumerate(&rsq)?;
        let mut chosen: Vec<LatticeVector> = Vec::new();
        let mut ambient: Vec<Vec<Quaternion>> = Vec::new();
        for sv in &found {
            let v = lattice.vector_from_z(&sv.z)?;
            ambient.push(v.ambient.clone());
            if h_linearly_independent(&ambient) {
                chosen.push(v);
                if chosen.len() == m {
                    break;
                }
            } else {
                ambient.pop();
            }
        }
        if chosen.len() == m {
            let exact_norms_sq: Vec<BigRational> = chosen.iter().map(|v| v.norm_sq.clone()).collect();
            let minima = chosen.iter().map(|v| lattice.length(v)).collect();
            return Ok(MinimaReport { minima, witnesses: chosen, exact_norms_sq });
        }
        radius = &radius * &growth;
    }
}

/// Number of lattice vectors of length `||Λ||`.
pub fn minimal_vector_count(lattice: &HurwitzLattice, min_norm_sq: &BigRational, capacity: usize) -> Result<usize> {
    let e = Enumerator::new(lattice, capacity)?;
    Ok(e.enumerate(min_norm_sq)?.len())
}
