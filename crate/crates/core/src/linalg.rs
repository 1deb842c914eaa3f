//! Dense real kernels: Pfaffians and exponentials of antisymmetric matrices.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Numerical tolerances shared by the engine.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Max entry of `A + A^T` accepted as antisymmetric.
    pub antisymmetry: f64,
    /// Max entry of `R R^T - I` accepted as orthogonal.
    pub orthogonality: f64,
    /// Orthogonality defect above which a computed rotation is re-polished.
    pub polish_trigger: f64,
    /// Probabilities may leave `[0, 1]` by this much before it is an error.
    pub probability: f64,
    /// Largest imaginary residue tolerated in a real-valued expectation.
    pub imaginary: f64,
}

pub const TOL: Tolerances = Tolerances {
    antisymmetry: 1e-12,
    orthogonality: 1e-10,
    polish_trigger: 1e-13,
    probability: 1e-8,
    imaginary: 1e-9,
};

pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
}

pub fn antisymmetry_defect(a: &DMatrix<f64>) -> f64 {
    max_abs(&(a + a.transpose()))
}

pub fn check_antisymmetric(a: &DMatrix<f64>) -> Result<()> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch {
            expected: a.nrows(),
            found: a.ncols(),
        });
    }
    if a.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite);
    }
    let scale = max_abs(a).max(1.0);
    let defect = antisymmetry_defect(a);
    if defect > TOL.antisymmetry * scale {
        return Err(Error::NotAntisymmetric(defect));
    }
    Ok(())
}

pub fn orthogonality_defect(r: &DMatrix<f64>) -> f64 {
    let n = r.nrows();
    max_abs(&(r * r.transpose() - DMatrix::<f64>::identity(n, n)))
}

/// Pfaffian by skew-symmetric tridiagonalisation with row/column pivoting.
///
/// Odd dimensions give 0 and the empty matrix gives 1.
pub fn pfaffian(a: &DMatrix<f64>) -> Result<f64> {
    check_antisymmetric(a)?;
    let n = a.nrows();
    if n == 0 {
        return Ok(1.0);
    }
    if n % 2 == 1 {
        return Ok(0.0);
    }
    let mut m = a.clone();
    let mut pf = 1.0;
    for k in (0..n - 1).step_by(2) {
        let mut kp = k + 1;
        let mut best = m[(k + 1, k)].abs();
        for i in k + 2..n {
            if m[(i, k)].abs() > best {
                best = m[(i, k)].abs();
                kp = i;
            }
        }
        if kp != k + 1 {
            m.swap_rows(k + 1, kp);
            m.swap_columns(k + 1, kp);
            pf = -pf;
        }
        let pivot = m[(k, k + 1)];
        if pivot == 0.0 {
            return Ok(0.0);
        }
        pf *= pivot;
        if k + 2 < n {
            let tau: Vec<f64> = (k + 2..n).map(|j| m[(k, j)] / pivot).collect();
            let col: Vec<f64> = (k + 2..n).map(|i| m[(i, k + 1)]).collect();
            for (ii, i) in (k + 2..n).enumerate() {
                for (jj, j) in (k + 2..n).enumerate() {
                    m[(i, j)] += tau[ii] * col[jj] - col[ii] * tau[jj];
                }
            }
        }
    }
    Ok(pf)
}

/// `exp(scale * h)` for antisymmetric `h`.
///
/// Scaling and squaring around a diagonal Pade(6,6) approximant, followed by
/// a Newton-Schulz polish whenever the result drifts from orthogonality.
pub fn expm_antisymmetric(h: &DMatrix<f64>, scale: f64) -> Result<DMatrix<f64>> {
    check_antisymmetric(h)?;
    let n = h.nrows();
    let a = h * scale;
    let norm1 = (0..n)
        .map(|j| a.column(j).iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0_f64, f64::max);
    let squarings = if norm1 > 0.5 {
        (norm1 / 0.5).log2().ceil() as i32
    } else {
        0
    };
    let b = &a / 2f64.powi(squarings);
    let mut r = pade6(&b)?;
    for _ in 0..squarings {
        r = &r * &r;
    }
    for _ in 0..4 {
        if orthogonality_defect(&r) <= TOL.polish_trigger {
            break;
        }
        let rtr = r.transpose() * &r;
        r = &r * (DMatrix::<f64>::identity(n, n) * 3.0 - rtr) * 0.5;
    }
    Ok(r)
}

fn pade6(b: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    const C: [f64; 7] = [
        1.0,
        1.0 / 2.0,
        5.0 / 44.0,
        1.0 / 66.0,
        1.0 / 792.0,
        1.0 / 15840.0,
        1.0 / 665280.0,
    ];
    let n = b.nrows();
    let id = DMatrix::<f64>::identity(n, n);
    let b2 = b * b;
    let b4 = &b2 * &b2;
    let b6 = &b4 * &b2;
    let even = &id * C[0] + &b2 * C[2] + &b4 * C[4] + &b6 * C[6];
    let odd = b * (&id * C[1] + &b2 * C[3] + &b4 * C[5]);
    let num = &even + &odd;
    let den = &even - &odd;
    den.lu()
        .solve(&num)
        .ok_or_else(|| Error::InternalConsistency("singular Pade denominator".into()))
}

pub fn determinant(m: &DMatrix<f64>) -> f64 {
    m.clone().lu().determinant()
}

/// Random antisymmetric matrix with entries uniform in `[-amp, amp]`.
pub fn random_antisymmetric<R: rand::Rng + ?Sized>(
    dim: usize,
    amp: f64,
    rng: &mut R,
) -> DMatrix<f64> {
    let mut m = DMatrix::<f64>::zeros(dim, dim);
    for i in 0..dim {
        for j in i + 1..dim {
            let v = rng.gen_range(-amp..=amp);
            m[(i, j)] = v;
            m[(j, i)] = -v;
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Pfaffian straight from the perfect-matching expansion.
    fn pfaffian_by_matchings(a: &DMatrix<f64>) -> f64 {
        fn rec(a: &DMatrix<f64>, idx: &[usize]) -> f64 {
            if idx.is_empty() {
                return 1.0;
            }
            let first = idx[0];
            let mut total = 0.0;
            for k in 1..idx.len() {
                let rest: Vec<usize> = idx[1..]
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j + 1 != k)
                    .map(|(_, &v)| v)
                    .collect();
                let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
                total += sign * a[(first, idx[k])] * rec(a, &rest);
            }
            total
        }
        let idx: Vec<usize> = (0..a.nrows()).collect();
        rec(a, &idx)
    }

    #[test]
    fn pfaffian_of_small_matrices() {
        let a = DMatrix::from_row_slice(
            4,
            4,
            &[
                0.0, 1.0, 2.0, 3.0, //
                -1.0, 0.0, 4.0, 5.0, //
                -2.0, -4.0, 0.0, 6.0, //
                -3.0, -5.0, -6.0, 0.0,
            ],
        );
        // 1*6 - 2*5 + 3*4
        assert!((pfaffian(&a).unwrap() - 8.0).abs() < 1e-12);
        assert_eq!(pfaffian(&DMatrix::zeros(0, 0)).unwrap(), 1.0);
        assert_eq!(pfaffian(&DMatrix::zeros(3, 3)).unwrap(), 0.0);
        let two = DMatrix::from_row_slice(2, 2, &[0.0, -2.5, 2.5, 0.0]);
        assert_eq!(pfaffian(&two).unwrap(), -2.5);
    }

    #[test]
    fn pfaffian_agrees_with_matching_expansion() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for dim in [2, 4, 6, 8] {
            let a = random_antisymmetric(dim, 1.0, &mut rng);
            let fast = pfaffian(&a).unwrap();
            let slow = pfaffian_by_matchings(&a);
            assert!((fast - slow).abs() < 1e-12, "dim {dim}: {fast} vs {slow}");
        }
    }

    #[test]
    fn pfaffian_rejects_bad_input() {
        let mut a = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0]);
        a[(0, 0)] = 1e-3;
        assert!(matches!(pfaffian(&a), Err(Error::NotAntisymmetric(_))));
        a[(0, 0)] = f64::NAN;
        assert!(matches!(pfaffian(&a), Err(Error::NonFinite)));
    }

    #[test]
    fn two_by_two_exponential_is_a_rotation() {
        let theta = 0.37;
        let h = DMatrix::from_row_slice(2, 2, &[0.0, theta, -theta, 0.0]);
        let r = expm_antisymmetric(&h, 4.0).unwrap();
        let (c, s) = ((4.0 * theta).cos(), (4.0 * theta).sin());
        let want = DMatrix::from_row_slice(2, 2, &[c, s, -s, c]);
        assert!(max_abs(&(r - want)) < 1e-14);
    }

    #[test]
    fn exponential_matches_taylor_series() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let h = random_antisymmetric(6, 0.3, &mut rng);
        let mut term = DMatrix::<f64>::identity(6, 6);
        let mut sum = term.clone();
        for k in 1..40 {
            term = &term * &h * (4.0 / k as f64);
            sum += &term;
        }
        let r = expm_antisymmetric(&h, 4.0).unwrap();
        assert!(max_abs(&(r - sum)) < 1e-12);
    }

    #[test]
    fn large_generators_stay_orthogonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let h = random_antisymmetric(40, 3.0, &mut rng);
        let r = expm_antisymmetric(&h, 4.0).unwrap();
        assert!(orthogonality_defect(&r) < TOL.orthogonality);
        assert!((determinant(&r) - 1.0).abs() < 1e-9);
    }
}
