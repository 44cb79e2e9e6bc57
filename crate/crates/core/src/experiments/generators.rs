//! Random initial conditions.

use rand::distr::{Distribution, Uniform};
use rand::Rng;

use crate::error::{Error, Result};
use crate::matrix::{AppraisalMatrix, ToleranceConfig};

/// Strictly-positive floor used when redrawing diagonal entries and gamma.
const POSITIVE_FLOOR: f64 = 1e-9;

fn uniform(lo: f64, hi: f64) -> Result<Uniform<f64>> {
    Uniform::new_inclusive(lo, hi)
        .map_err(|e| Error::ParameterOutOfRange(format!("uniform [{lo}, {hi}]: {e}")))
}

/// I.i.d. entries uniform on `[-a, a]`, redrawn until no row is zero.
pub fn gen_uniform_nzrow<R: Rng + ?Sized>(
    n: usize,
    a: f64,
    rng: &mut R,
    tol: &ToleranceConfig,
) -> Result<AppraisalMatrix> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::ParameterOutOfRange(format!("support half-width {a}")));
    }
    loop {
        let x = gen_uniform_interval(n, -a, a, rng)?;
        if x.is_nz_row(tol) {
            return Ok(x);
        }
    }
}

/// I.i.d. entries uniform on `[x_min, x_max]`.
pub fn gen_uniform_interval<R: Rng + ?Sized>(
    n: usize,
    x_min: f64,
    x_max: f64,
    rng: &mut R,
) -> Result<AppraisalMatrix> {
    if !(x_min < x_max) {
        return Err(Error::ParameterOutOfRange(format!(
            "empty interval [{x_min}, {x_max}]"
        )));
    }
    let dist = uniform(x_min, x_max)?;
    AppraisalMatrix::new(n, dist.sample_iter(rng).take(n * n).collect())
}

/// Output of [`gen_rs_symm_with_gamma`].
#[derive(Clone, Debug)]
pub struct RsSymmSample {
    pub x: AppraisalMatrix,
    pub symmetric: AppraisalMatrix,
    pub gamma: Vec<f64>,
}

/// `diag(gamma) * S` with `S` symmetric uniform on `[-1, 1]` (positive
/// diagonal) and `gamma` uniform on `(0, 1]`.
pub fn gen_rs_symm<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<AppraisalMatrix> {
    gen_rs_symm_with_gamma(n, rng).map(|s| s.x)
}

pub fn gen_rs_symm_with_gamma<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<RsSymmSample> {
    if n == 0 {
        return Err(Error::Empty);
    }
    let entry = uniform(-1.0, 1.0)?;
    let unit = uniform(0.0, 1.0)?;
    let mut s = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            let v = if i == j {
                loop {
                    let d = entry.sample(rng);
                    if d > POSITIVE_FLOOR {
                        break d;
                    }
                }
            } else {
                entry.sample(rng)
            };
            s[i * n + j] = v;
            s[j * n + i] = v;
        }
    }
    let gamma: Vec<f64> = (0..n)
        .map(|_| loop {
            let g = unit.sample(rng);
            if g > POSITIVE_FLOOR {
                break g;
            }
        })
        .collect();
    let symmetric = AppraisalMatrix::new(n, s)?;
    let x = AppraisalMatrix::from_fn(n, |i, j| gamma[i] * symmetric.get(i, j))?;
    Ok(RsSymmSample { x, symmetric, gamma })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::rng::RngStream;

    #[test]
    fn support_and_determinism() {
        let tol = ToleranceConfig::default();
        let x = gen_uniform_nzrow(6, 0.5, &mut RngStream::new(3).rng(), &tol).unwrap();
        assert!(x.as_slice().iter().all(|v| v.abs() <= 0.5));
        let y = gen_uniform_nzrow(6, 0.5, &mut RngStream::new(3).rng(), &tol).unwrap();
        assert_eq!(x, y);
        let z = gen_uniform_interval(6, -0.5, 0.5, &mut RngStream::new(3).rng()).unwrap();
        assert_eq!(x, z);
        assert!(gen_uniform_nzrow(3, 0.0, &mut RngStream::new(3).rng(), &tol).is_err());
        assert!(gen_uniform_interval(3, 1.0, 1.0, &mut RngStream::new(3).rng()).is_err());

        let w = gen_uniform_interval(5, 0.25, 2.25, &mut RngStream::new(9).rng()).unwrap();
        assert!(w.as_slice().iter().all(|v| (0.25..=2.25).contains(v)));
    }

    #[test]
    fn rs_symm_samples_are_symmetrizable() {
        let tol = ToleranceConfig::default();
        for seed in 0..50 {
            let s = gen_rs_symm_with_gamma(7, &mut RngStream::new(seed).rng()).unwrap();
            assert!(s.x.sign_pattern(&tol).is_symmetric());
            assert!(s.x.is_rs_symm_pos(&tol));
            let w = s.x.find_gamma(&tol).unwrap();
            // diag(1/gamma) X = S, so the witness is gamma_0 / gamma_i
            for i in 0..7 {
                let expected = s.gamma[0] / s.gamma[i];
                assert!((w.gamma[i] / expected - 1.0).abs() < 1e-9);
            }
        }
        let a = gen_rs_symm(4, &mut RngStream::new(1).rng()).unwrap();
        let b = gen_rs_symm(4, &mut RngStream::new(1).rng()).unwrap();
        assert_eq!(a, b);
    }
}
