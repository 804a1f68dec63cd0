//! The fixed operator algebra: Pauli matrices, the Dirac matrices α and β,
//! the extra diagonal matrix β¹, and the 4×4 spin operator Σ.
//!
//! All constructors return exact entries (0, ±1, ±i only), so the identity
//! checks in this module hold to floating-point roundoff; [`DEFAULT_TOL`]
//! only has to absorb products of exact entries.
//!
//! β¹ = diag(1, 0, −1, 0) is not a member of the Dirac algebra: it commutes
//! with β but not with the α's. Its commutation relations are computed by the
//! test suite rather than assumed.

use nalgebra::{Dim, Matrix, RawStorage};
use serde::{Deserialize, Serialize};

use crate::{Matrix2, Matrix4, C64};

/// Absolute entrywise tolerance for exact-structure assertions.
pub const DEFAULT_TOL: f64 = 1e-12;

/// Component index of the vector operators σ, α, Σ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    /// All three axes, in x, y, z order.
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    /// Index of this axis into a 3-vector.
    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }
}

impl std::fmt::Display for Axis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Axis::X => write!(f, "x"),
            Axis::Y => write!(f, "y"),
            Axis::Z => write!(f, "z"),
        }
    }
}

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

/// The Pauli matrix σ_axis.
pub fn pauli(axis: Axis) -> Matrix2 {
    match axis {
        Axis::X => Matrix2::new(ZERO, ONE, ONE, ZERO),
        Axis::Y => Matrix2::new(ZERO, -I, I, ZERO),
        Axis::Z => Matrix2::new(ONE, ZERO, ZERO, -ONE),
    }
}

/// The Dirac matrix α_axis: block-off-diagonal in σ_axis.
///
/// ```text
/// α = ( 0  σ )
///     ( σ  0 )
/// ```
pub fn alpha(axis: Axis) -> Matrix4 {
    let s = pauli(axis);
    from_blocks(&Matrix2::zeros(), &s, &s, &Matrix2::zeros())
}

/// The Dirac matrix β = diag(1, 1, −1, −1).
pub fn beta() -> Matrix4 {
    Matrix4::from_diagonal(&nalgebra::Vector4::new(ONE, ONE, -ONE, -ONE))
}

/// The extra diagonal matrix β¹ = diag(1, 0, −1, 0) that injects the
/// transition quantum ħω into components 1 and 3.
pub fn beta1() -> Matrix4 {
    Matrix4::from_diagonal(&nalgebra::Vector4::new(ONE, ZERO, -ONE, ZERO))
}

/// The 4×4 spin operator Σ_axis: block-diagonal in σ_axis.
///
/// ```text
/// Σ = ( σ  0 )
///     ( 0  σ )
/// ```
pub fn sigma_big(axis: Axis) -> Matrix4 {
    let s = pauli(axis);
    from_blocks(&s, &Matrix2::zeros(), &Matrix2::zeros(), &s)
}

/// Assemble a 4×4 matrix from four 2×2 blocks.
pub fn from_blocks(ul: &Matrix2, ur: &Matrix2, ll: &Matrix2, lr: &Matrix2) -> Matrix4 {
    let mut m = Matrix4::zeros();
    for i in 0..2 {
        for j in 0..2 {
            m[(i, j)] = ul[(i, j)];
            m[(i, j + 2)] = ur[(i, j)];
            m[(i + 2, j)] = ll[(i, j)];
            m[(i + 2, j + 2)] = lr[(i, j)];
        }
    }
    m
}

/// ab + ba.
pub fn anticommutator(a: &Matrix4, b: &Matrix4) -> Matrix4 {
    a * b + b * a
}

/// ab − ba.
pub fn commutator(a: &Matrix4, b: &Matrix4) -> Matrix4 {
    a * b - b * a
}

/// The Dirac parity conjugation β m β of an internal operator.
///
/// Operators that flip sign (the α's) are polar under parity; operators that
/// keep it (the Σ's, β itself) are axial or scalar. Pairing the polar field
/// E with α keeps the interaction a scalar, pairing it with Σ does not.
pub fn parity_conjugate(m: &Matrix4) -> Matrix4 {
    let b = beta();
    b * m * b
}

/// Largest absolute value of any entry.
pub fn max_abs_entry<R, C, S>(m: &Matrix<C64, R, C, S>) -> f64
where
    R: Dim,
    C: Dim,
    S: RawStorage<C64, R, C>,
{
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Largest absolute entrywise difference between two equally shaped matrices.
pub fn max_abs_diff<R, C, S>(a: &Matrix<C64, R, C, S>, b: &Matrix<C64, R, C, S>) -> f64
where
    R: Dim,
    C: Dim,
    S: RawStorage<C64, R, C>,
{
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Entrywise equality within an absolute tolerance.
pub fn approx_eq<R, C, S>(a: &Matrix<C64, R, C, S>, b: &Matrix<C64, R, C, S>, tol: f64) -> bool
where
    R: Dim,
    C: Dim,
    S: RawStorage<C64, R, C>,
{
    max_abs_diff(a, b) <= tol
}

/// Largest absolute deviation of M from M†.
pub fn hermiticity_deviation<D, S>(m: &nalgebra::SquareMatrix<C64, D, S>) -> f64
where
    D: Dim,
    S: RawStorage<C64, D, D>,
{
    let n = m.nrows();
    let mut dev = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            dev = dev.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    dev
}

/// M = M† within an absolute entrywise tolerance.
pub fn is_hermitian<D, S>(m: &nalgebra::SquareMatrix<C64, D, S>, tol: f64) -> bool
where
    D: Dim,
    S: RawStorage<C64, D, D>,
{
    hermiticity_deviation(m) <= tol
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent oracle: naive triple-loop product over raw entries, kept
    /// separate from the nalgebra multiplication path used by the crate.
    fn mul_oracle(a: &Matrix4, b: &Matrix4) -> Matrix4 {
        let mut out = Matrix4::zeros();
        for i in 0..4 {
            for j in 0..4 {
                let mut acc = ZERO;
                for k in 0..4 {
                    acc += a[(i, k)] * b[(k, j)];
                }
                out[(i, j)] = acc;
            }
        }
        out
    }

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn pauli_entries_exact() {
        let sx = pauli(Axis::X);
        assert_eq!(sx, Matrix2::new(c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)));
        let sy = pauli(Axis::Y);
        assert_eq!(
            sy,
            Matrix2::new(c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.))
        );
        let sz = pauli(Axis::Z);
        assert_eq!(
            sz,
            Matrix2::new(c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.))
        );
    }

    #[test]
    fn alpha_x_entries() {
        // 1-based entries (1,4), (2,3), (3,2), (4,1) are 1; everything else 0.
        let ax = alpha(Axis::X);
        let mut expected = Matrix4::zeros();
        expected[(0, 3)] = ONE;
        expected[(1, 2)] = ONE;
        expected[(2, 1)] = ONE;
        expected[(3, 0)] = ONE;
        assert_eq!(ax, expected);
    }

    #[test]
    fn alpha_z_entries() {
        // 1-based entries (1,3) = (3,1) = 1 and (2,4) = (4,2) = −1.
        let az = alpha(Axis::Z);
        let mut expected = Matrix4::zeros();
        expected[(0, 2)] = ONE;
        expected[(1, 3)] = -ONE;
        expected[(2, 0)] = ONE;
        expected[(3, 1)] = -ONE;
        assert_eq!(az, expected);
    }

    #[test]
    fn alpha_y_squares_to_identity() {
        let ay = alpha(Axis::Y);
        let sq = mul_oracle(&ay, &ay);
        assert!(approx_eq(&sq, &Matrix4::identity(), DEFAULT_TOL));
        assert!(approx_eq(&(ay * ay), &sq, 0.0));
    }

    #[test]
    fn beta_entries_square_and_trace() {
        let b = beta();
        assert_eq!(
            b,
            Matrix4::from_diagonal(&nalgebra::Vector4::new(ONE, ONE, -ONE, -ONE))
        );
        assert!(approx_eq(&mul_oracle(&b, &b), &Matrix4::identity(), 0.0));
        assert_eq!(b.trace(), ZERO);
    }

    #[test]
    fn beta1_entries_and_square() {
        let b1 = beta1();
        assert_eq!(
            b1,
            Matrix4::from_diagonal(&nalgebra::Vector4::new(ONE, ZERO, -ONE, ZERO))
        );
        let expected_sq = Matrix4::from_diagonal(&nalgebra::Vector4::new(ONE, ZERO, ONE, ZERO));
        assert!(approx_eq(&mul_oracle(&b1, &b1), &expected_sq, 0.0));
    }

    #[test]
    fn beta_and_beta1_commute() {
        let comm = commutator(&beta(), &beta1());
        assert!(max_abs_entry(&comm) <= DEFAULT_TOL);
    }

    #[test]
    fn sigma_big_entries() {
        let sz = sigma_big(Axis::Z);
        assert_eq!(
            sz,
            Matrix4::from_diagonal(&nalgebra::Vector4::new(ONE, -ONE, ONE, -ONE))
        );
        let sx = sigma_big(Axis::X);
        let mut expected = Matrix4::zeros();
        expected[(0, 1)] = ONE;
        expected[(1, 0)] = ONE;
        expected[(2, 3)] = ONE;
        expected[(3, 2)] = ONE;
        assert_eq!(sx, expected);
        let sy = sigma_big(Axis::Y);
        assert!(approx_eq(&mul_oracle(&sy, &sy), &Matrix4::identity(), 0.0));
    }

    #[test]
    fn dirac_anticommutation_relations() {
        for i in Axis::ALL {
            for j in Axis::ALL {
                let anti = anticommutator(&alpha(i), &alpha(j));
                let expected = if i == j {
                    Matrix4::identity() * c(2.0, 0.0)
                } else {
                    Matrix4::zeros()
                };
                assert!(
                    approx_eq(&anti, &expected, DEFAULT_TOL),
                    "{{α_{i}, α_{j}}} deviates by {}",
                    max_abs_diff(&anti, &expected)
                );
            }
            let anti_b = anticommutator(&alpha(i), &beta());
            assert!(max_abs_entry(&anti_b) <= DEFAULT_TOL, "{{α_{i}, β}} ≠ 0");
        }
    }

    #[test]
    fn anticommutator_examples() {
        let zero = anticommutator(&alpha(Axis::X), &alpha(Axis::Y));
        let oracle = mul_oracle(&alpha(Axis::X), &alpha(Axis::Y))
            + mul_oracle(&alpha(Axis::Y), &alpha(Axis::X));
        assert!(max_abs_entry(&oracle) <= DEFAULT_TOL);
        assert!(max_abs_entry(&zero) <= DEFAULT_TOL);
        let two_id = anticommutator(&alpha(Axis::X), &alpha(Axis::X));
        assert!(approx_eq(
            &two_id,
            &(Matrix4::identity() * c(2.0, 0.0)),
            DEFAULT_TOL
        ));
        let zero_b = anticommutator(&alpha(Axis::Z), &beta());
        assert!(max_abs_entry(&zero_b) <= DEFAULT_TOL);
    }

    #[test]
    fn commutator_identity_with_anything_is_zero() {
        let id = Matrix4::identity();
        assert!(max_abs_entry(&commutator(&id, &alpha(Axis::X))) <= DEFAULT_TOL);
    }

    #[test]
    fn beta1_does_not_commute_with_alpha() {
        // Frozen from the naive-multiply oracle: [α_z, β¹] has 1-based entries
        // (1,3) = −2 and (3,1) = +2, everything else 0.
        let comm = commutator(&alpha(Axis::Z), &beta1());
        let oracle = {
            let ab = mul_oracle(&alpha(Axis::Z), &beta1());
            let ba = mul_oracle(&beta1(), &alpha(Axis::Z));
            ab - ba
        };
        let mut expected = Matrix4::zeros();
        expected[(0, 2)] = c(-2.0, 0.0);
        expected[(2, 0)] = c(2.0, 0.0);
        assert!(approx_eq(&oracle, &expected, 0.0));
        assert!(approx_eq(&comm, &expected, DEFAULT_TOL));

        for i in Axis::ALL {
            let comm = commutator(&alpha(i), &beta1());
            assert!(max_abs_entry(&comm) > 0.5, "[α_{i}, β¹] should be nonzero");
        }
    }

    #[test]
    fn operators_are_hermitian() {
        for i in Axis::ALL {
            assert!(is_hermitian(&alpha(i), DEFAULT_TOL));
            assert!(is_hermitian(&sigma_big(i), DEFAULT_TOL));
        }
        assert!(is_hermitian(&beta(), DEFAULT_TOL));
        assert!(is_hermitian(&beta1(), DEFAULT_TOL));
    }

    #[test]
    fn parity_flips_alpha_but_not_sigma() {
        for i in Axis::ALL {
            let pa = parity_conjugate(&alpha(i));
            assert!(
                approx_eq(&pa, &(-alpha(i)), DEFAULT_TOL),
                "β α_{i} β should equal −α_{i}"
            );
            let ps = parity_conjugate(&sigma_big(i));
            assert!(
                approx_eq(&ps, &sigma_big(i), DEFAULT_TOL),
                "β Σ_{i} β should equal Σ_{i}"
            );
        }
        assert!(approx_eq(&parity_conjugate(&beta()), &beta(), DEFAULT_TOL));
    }

    #[test]
    fn block_structure_matches_pauli_blocks() {
        for i in Axis::ALL {
            let s = pauli(i);
            let a = alpha(i);
            let big = sigma_big(i);
            for r in 0..2 {
                for c_ in 0..2 {
                    // α: Pauli block on the off-diagonal, zero on the diagonal.
                    assert_eq!(a[(r, c_ + 2)], s[(r, c_)]);
                    assert_eq!(a[(r + 2, c_)], s[(r, c_)]);
                    assert_eq!(a[(r, c_)], ZERO);
                    assert_eq!(a[(r + 2, c_ + 2)], ZERO);
                    // Σ: Pauli block on the diagonal, zero off it.
                    assert_eq!(big[(r, c_)], s[(r, c_)]);
                    assert_eq!(big[(r + 2, c_ + 2)], s[(r, c_)]);
                    assert_eq!(big[(r, c_ + 2)], ZERO);
                    assert_eq!(big[(r + 2, c_)], ZERO);
                }
            }
        }
    }

    #[test]
    fn hermiticity_deviation_detects_asymmetry() {
        let mut m = Matrix4::zeros();
        m[(0, 1)] = c(1.0, 0.0);
        m[(1, 0)] = c(1.0, 0.5);
        assert!((hermiticity_deviation(&m) - 0.5).abs() < 1e-15);
        assert!(!is_hermitian(&m, DEFAULT_TOL));
    }
}
