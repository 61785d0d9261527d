//! Rescaling a determinant-one lattice so that every successive minimum
//! becomes the geometric mean of the old ones.
//!
//! Let `v_1 .. v_m` be minima witnesses with exact squared lengths `N_k`
//! (before scale), and `b*_k`, `N*_k` their weighted Gram–Schmidt data. The
//! map `T` sending `x` to the coordinates `h(x, e_k) / min_k` in the
//! orthonormal frame `e_k = b*_k / √N*_k` is H-linear. In skeleton terms the
//! image of `x` has rational coordinates `c_k(x) = h(x, b*_k) / N*_k` with
//! weights `N*_k / N_k`, and the product-of-minima factor `(∏ min_k)^{1/m}`
//! becomes the new global scale `s (∏ N_k)^{1/(2m)}`.

use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::hlattice::HurwitzLattice;
use crate::minima::{quaternionic_minima, MinimaReport};
use crate::quat::Quaternion;
use crate::real::Real;

use super::gram_schmidt::{gram_schmidt_exact, hermitian};

/// Relative tolerance for "determinant one".
pub const UNIMODULAR_TOL: f64 = 1.0 / (1u64 << 40) as f64;

#[derive(Clone, Debug)]
pub struct Rescaled {
    pub lattice: HurwitzLattice,
    /// Minima of the input lattice.
    pub input_minima: MinimaReport,
    /// `(∏ min_i)^{1/m}`, the length of the image of `v_1` and the minimum
    /// of the rescaled lattice.
    pub expected_min: Real,
    /// Z-coordinates of the image of `v_1` (unchanged by the map).
    pub first_witness_z: Vec<i64>,
}

pub fn check_unimodular(lattice: &HurwitzLattice) -> Result<()> {
    let det = lattice.determinant();
    if det.relative_diff(&Real::one(lattice.precision())) > UNIMODULAR_TOL {
        return Err(Error::NotUnimodular { det: det.to_decimal(20) });
    }
    Ok(())
}

/// Computes the minima of `lattice` and rescales.
pub fn rescale(lattice: &HurwitzLattice, capacity: usize) -> Result<Rescaled> {
    check_unimodular(lattice)?;
    let report = quaternionic_minima(lattice, capacity)?;
    rescale_by_minima(lattice, &report)
}

/// The rescaled lattice for a given minima report of a determinant-one lattice.
pub fn rescale_by_minima(lattice: &HurwitzLattice, report: &MinimaReport) -> Result<Rescaled> {
    check_unimodular(lattice)?;
    let m = lattice.m();
    if report.witnesses.len() != m {
        return Err(Error::InvalidArgument(format!("{} witnesses for rank {m}", report.witnesses.len())));
    }
    let weights = lattice.weights();
    let vs: Vec<Vec<Quaternion>> = report.witnesses.iter().map(|v| v.ambient.clone()).collect();
    let (stars, star_norms) = gram_schmidt_exact(&vs, weights)?;
    let basis: Vec<Vec<Quaternion>> = lattice
        .basis()
        .iter()
        .map(|b| {
            stars
                .iter()
                .zip(&star_norms)
                .map(|(bs, n)| hermitian(b, bs, weights).scale(&n.recip()))
                .collect()
        })
        .collect();
    let new_weights: Vec<BigRational> =
        star_norms.iter().zip(&report.exact_norms_sq).map(|(ns, n)| ns / n).collect();
    let prec = lattice.precision();
    let prod = report.exact_norms_sq.iter().fold(BigRational::one(), |acc, n| acc * n);
    let factor = Real::from_rational(&prod, prec).root(2 * m as u32);
    let scale = lattice.scale() * &factor;
    let expected_min = scale.clone();
    let mut out = HurwitzLattice::new(basis, new_weights, scale)?;
    if let Some(c) = lattice.comment() {
        out = out.with_comment(format!("{c} (rescaled by minima)"));
    }
    let first_witness_z = report.witnesses[0].z.clone();
    debug_assert!(out.vector_from_z(&first_witness_z).map(|v| v.norm_sq.is_one()).unwrap_or(false));
    debug_assert!(!expected_min.is_zero());
    Ok(Rescaled { lattice: out, input_minima: report.clone(), expected_min, first_witness_z })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::minima::{short_vectors, DEFAULT_CAPACITY};
    use crate::real::Precision;

    fn p() -> Precision {
        Precision::default()
    }

    fn skewed() -> HurwitzLattice {
        let l = HurwitzLattice::from_basis(
            vec![
                vec![Quaternion::from_ints(1, 0, 0, 0), Quaternion::from_halves(1, 1, 1, 1)],
                vec![Quaternion::from_ints(0, 0, 0, 0), Quaternion::from_ints(3, 1, 0, 0)],
            ],
            p(),
        )
        .unwrap();
        l.normalized()
    }

    #[test]
    fn rescaled_lattice_is_unimodular_with_equal_minima() {
        let l = skewed();
        let out = rescale(&l, DEFAULT_CAPACITY).unwrap();
        assert!(out.lattice.determinant().relative_diff(&Real::one(p())) < UNIMODULAR_TOL);
        let prod = out.input_minima.product();
        let mm = out.expected_min.powi(2);
        assert!(mm.relative_diff(&prod) < UNIMODULAR_TOL);
        let image = out.lattice.vector_from_z(&out.first_witness_z).unwrap();
        assert!(image.norm_sq.is_one());
        let after = quaternionic_minima(&out.lattice, DEFAULT_CAPACITY).unwrap();
        assert!(after.minima[0].relative_diff(&out.expected_min) < UNIMODULAR_TOL);
        let below = &out.expected_min * &Real::from_f64(1.0 - 1.0 / (1u64 << 30) as f64, p());
        assert!(short_vectors(&out.lattice, &below, DEFAULT_CAPACITY).unwrap().is_empty());
    }

    #[test]
    fn equal_minima_give_an_isometry() {
        let l = HurwitzLattice::standard(2, p()).unwrap().normalized();
        let out = rescale(&l, DEFAULT_CAPACITY).unwrap();
        assert_eq!(out.lattice.gram(), l.gram());
        assert!(out.lattice.scale().relative_diff(l.scale()) < 1e-36);
    }

    #[test]
    fn non_unimodular_input_is_rejected() {
        let l = HurwitzLattice::standard(2, p()).unwrap();
        assert!(matches!(rescale(&l, DEFAULT_CAPACITY), Err(Error::NotUnimodular { .. })));
    }
}
