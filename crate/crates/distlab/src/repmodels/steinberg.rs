//! The twisted Steinberg component: zero-sum functions on the projective
//! line, with the permutation action of the group and a scalar twist.

use super::Monomial;
use crate::angle::RationalAngle;
use crate::ffchar::{FiniteField, MulCharacter};
use crate::gl2fq::{Gl2Element, NonsplitTorus, ProjLine, TorusElement};
use crate::linalg::Mat;
use crate::scalar::{Scalar, C};

/// The Steinberg component twisted by `chi` (a character of the coefficient
/// field units). The underlying space is `{ h : P^1 -> C, sum h = 0 }` of
/// dimension `Q`, realized inside the full function space with the ordered
/// delta basis of [`ProjLine`]; the zero-sum basis is `v_j = e_j - e_Q`.
#[derive(Debug, Clone)]
pub struct SteinbergModel {
    pub twist: MulCharacter,
}

impl SteinbergModel {
    pub fn new(twist: MulCharacter) -> Self {
        SteinbergModel { twist }
    }

    /// Full-space monomial of `g` with an explicit scalar factor.
    pub fn full_monomial_with_factor(
        &self,
        field: &FiniteField,
        line: &ProjLine,
        g: &Gl2Element,
        factor: RationalAngle,
    ) -> Monomial {
        Monomial {
            perm: line.permutation(field, g),
            factors: vec![factor; line.len()],
        }
    }

    /// Full-space monomial of `g` with the determinant twist of the model.
    pub fn full_monomial(&self, field: &FiniteField, line: &ProjLine, g: &Gl2Element) -> Monomial {
        let factor = self.twist.eval(field, g.det(field));
        self.full_monomial_with_factor(field, line, g, factor)
    }

    /// The scalar a torus element acts by in front of the permutation: the
    /// twist evaluated at the norm of the element down to the subfield of
    /// order `q` (a square-class sign when the twist is at most quadratic
    /// there).
    pub fn torus_twist(
        &self,
        field: &FiniteField,
        torus: &NonsplitTorus,
        t: TorusElement,
        q: u64,
    ) -> RationalAngle {
        let n = torus.norm_to_base(field, t, q);
        self.twist.eval(field, n)
    }

    /// Action on the zero-sum subspace in the `v_j` basis.
    pub fn matrix_on_zero_sum<F: Scalar>(
        &self,
        field: &FiniteField,
        line: &ProjLine,
        g: &Gl2Element,
    ) -> Mat<F> {
        restrict_zero_sum(&self.full_monomial(field, line, g).to_mat())
    }
}

/// Restriction of an operator that preserves zero-sum functions to the
/// zero-sum subspace, in the basis `v_j = e_j - e_Q` (last index dropped).
pub fn restrict_zero_sum<F: Scalar>(full: &Mat<F>) -> Mat<F> {
    let n = full.nrows;
    let mut out = Mat::zeros(n - 1, n - 1);
    for j in 0..n - 1 {
        for i in 0..n - 1 {
            out[(i, j)] = full[(i, j)] - full[(i, n - 1)];
        }
    }
    out
}

/// The normalized generator of the Jacquet line attached to the line of
/// index `d`: value 1 there and `-1/Q` elsewhere, in full coordinates.
pub fn steinberg_jacquet_full<F: Scalar>(dim_full: usize, d: usize) -> Vec<C<F>> {
    let q = F::from_f64c((dim_full - 1) as f64);
    let mut v = vec![C::new(-F::one() / q, F::zero()); dim_full];
    v[d] = C::new(F::one(), F::zero());
    v
}
