//! The parabolically induced block: functions on the group transforming by
//! a pair of characters under the upper Borel, acted on by right translation.
//!
//! The basis is indexed by the projective line through the coset transversal
//! `r_d` with `r_d^{-1} . (1:0) = d`: `h_d` is supported on `B r_d` with
//! `h_d(b r_d) = chi1(b_11) chi2(b_22)`.

use super::Monomial;
use crate::angle::RationalAngle;
use crate::ffchar::{FiniteField, MulCharacter};
use crate::gl2fq::{Gl2Element, ProjLine, ProjPoint};
use crate::linalg::Mat;
use crate::scalar::{Scalar, C};
use num_traits::Zero;

#[derive(Debug, Clone)]
pub struct InducedModel {
    pub chi1: MulCharacter,
    pub chi2: MulCharacter,
}

impl InducedModel {
    pub fn new(chi1: MulCharacter, chi2: MulCharacter) -> Self {
        InducedModel { chi1, chi2 }
    }

    /// The transversal element `r_d` for the basis index `d`.
    pub fn rep_for_index(&self, field: &FiniteField, line: &ProjLine, idx: usize) -> Gl2Element {
        let p = line.points[idx];
        if p.x == 0 {
            Gl2Element::w()
        } else {
            Gl2Element::lower_unip(field.neg(p.y))
        }
    }

    /// Value of `chi1 (x) chi2` on an upper-triangular element.
    pub fn borel_char(&self, field: &FiniteField, b: &Gl2Element) -> RationalAngle {
        debug_assert!(b.is_upper_triangular());
        self.chi1.eval(field, b.e[0]) + self.chi2.eval(field, b.e[3])
    }

    /// Right translation by `g` as a monomial operator on the `h_d` basis:
    /// `pi(g) h_d = chi(r_{d'} g r_d^{-1}) h_{d'}` with `d' = g . d`.
    pub fn monomial(&self, field: &FiniteField, line: &ProjLine, g: &Gl2Element) -> Monomial {
        let n = line.len();
        let mut perm = vec![0usize; n];
        let mut factors = vec![RationalAngle::ZERO; n];
        for c in 0..n {
            let target = g.act_point(field, line.points[c]);
            let cp = line.index_of(target);
            let b0 = self
                .rep_for_index(field, line, cp)
                .mul(field, g)
                .mul(field, &self.rep_for_index(field, line, c).inv(field));
            assert!(b0.is_upper_triangular(), "transversal mismatch");
            perm[c] = cp;
            factors[c] = self.borel_char(field, &b0);
        }
        Monomial { perm, factors }
    }

    pub fn action_matrix<F: Scalar>(
        &self,
        field: &FiniteField,
        line: &ProjLine,
        g: &Gl2Element,
    ) -> Mat<F> {
        self.monomial(field, line, g).to_mat()
    }

    /// Basis of the subspace invariant under the unipotent radical fixing the
    /// given line: `v1` the coset function of the fixed line, and `v2` the
    /// average of the group over any other coset function.
    pub fn jacquet_basis<F: Scalar>(
        &self,
        field: &FiniteField,
        line: &ProjLine,
        fixed: ProjPoint,
    ) -> [Vec<C<F>>; 2] {
        let n = line.len();
        let radical: Vec<Gl2Element> = if fixed == ProjPoint::base() {
            field.elements().map(Gl2Element::upper_unip).collect()
        } else if fixed == ProjPoint::infinity() {
            field.elements().map(Gl2Element::lower_unip).collect()
        } else {
            panic!("jacquet basis only needed at the chart lines");
        };
        let fixed_idx = line.index_of(fixed);
        let other_idx = if fixed_idx == 0 { n - 1 } else { 0 };
        let mut v1 = vec![C::zero(); n];
        v1[fixed_idx] = C::new(F::one(), F::zero());
        let mut start = vec![C::zero(); n];
        start[other_idx] = C::new(F::one(), F::zero());
        let mut v2 = vec![C::zero(); n];
        for u in &radical {
            let img = self.monomial(field, line, u).to_mat::<F>().apply(&start);
            for (a, b) in v2.iter_mut().zip(img) {
                *a = *a + b;
            }
        }
        let inv = C::new(F::one() / F::from_f64c(radical.len() as f64), F::zero());
        for a in v2.iter_mut() {
            *a = *a * inv;
        }
        [v1, v2]
    }

    /// Exact pointwise evaluation of a basis expansion at a group element:
    /// `h = sum_d coeff_d h_d`, where `h_d(b r_d) = chi(b)` on its coset.
    pub fn eval_basis_function(
        &self,
        field: &FiniteField,
        line: &ProjLine,
        d: usize,
        g: &Gl2Element,
    ) -> Option<RationalAngle> {
        // g in B r_d iff g r_d^{-1} upper-triangular
        let b = g.mul(field, &self.rep_for_index(field, line, d).inv(field));
        if b.is_upper_triangular() {
            Some(self.borel_char(field, &b))
        } else {
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gl2fq::enumerate_gl2;
    use crate::linalg::Mat;

    #[test]
    fn action_is_homomorphism() {
        let field = FiniteField::of_order(3).unwrap();
        let line = ProjLine::new(&field);
        let model = InducedModel::new(MulCharacter::new(2, 1), MulCharacter::new(2, 0));
        let gs = enumerate_gl2(&field);
        for a in gs.iter().take(15) {
            for b in gs.iter().take(15) {
                let ma = model.action_matrix::<f64>(&field, &line, a);
                let mb = model.action_matrix::<f64>(&field, &line, b);
                // right translation: pi(ab) = pi(a) pi(b)
                let mab = model.action_matrix::<f64>(&field, &line, &a.mul(&field, b));
                assert!(ma.matmul(&mb).max_abs_diff(&mab) < 1e-12);
            }
        }
    }

    #[test]
    fn left_transformation_law() {
        // h_d(b g) = chi(b) h_d(g) checked through exact evaluation
        let field = FiniteField::of_order(9).unwrap();
        let line = ProjLine::new(&field);
        let model = InducedModel::new(MulCharacter::new(8, 3), MulCharacter::new(8, 5));
        for d in 0..line.len() {
            for g in enumerate_gl2(&field).into_iter().step_by(391) {
                for bu in [
                    Gl2Element::diag(field.generator, 1),
                    Gl2Element::diag(1, field.generator),
                    Gl2Element::upper_unip(1),
                ] {
                    let lhs = model.eval_basis_function(&field, &line, d, &bu.mul(&field, &g));
                    let rhs = model.eval_basis_function(&field, &line, d, &g);
                    match (lhs, rhs) {
                        (None, None) => {}
                        (Some(l), Some(r)) => {
                            assert_eq!(l, model.borel_char(&field, &bu) + r);
                        }
                        _ => panic!("support must be a union of left Borel cosets"),
                    }
                }
            }
        }
    }

    #[test]
    fn central_elements_act_by_product_character() {
        let field = FiniteField::of_order(9).unwrap();
        let line = ProjLine::new(&field);
        let model = InducedModel::new(MulCharacter::new(8, 1), MulCharacter::new(8, 2));
        for z in 1..9u64 {
            let m = model.monomial(&field, &line, &Gl2Element::diag(z, z));
            let expect = model.chi1.eval(&field, z) + model.chi2.eval(&field, z);
            for c in 0..line.len() {
                assert_eq!(m.perm[c], c);
                assert_eq!(m.factors[c], expect);
            }
        }
    }

    #[test]
    fn jacquet_spaces_have_dim_two() {
        let field = FiniteField::of_order(9).unwrap();
        let line = ProjLine::new(&field);
        let model = InducedModel::new(MulCharacter::new(8, 1), MulCharacter::new(8, 5));
        for fixed in [ProjPoint::base(), ProjPoint::infinity()] {
            let [v1, v2] = model.jacquet_basis::<f64>(&field, &line, fixed);
            // both invariant under the radical
            let radical: Vec<Gl2Element> = if fixed == ProjPoint::base() {
                field.elements().map(Gl2Element::upper_unip).collect()
            } else {
                field.elements().map(Gl2Element::lower_unip).collect()
            };
            for u in &radical {
                let m = model.action_matrix::<f64>(&field, &line, u);
                for v in [&v1, &v2] {
                    let img = m.apply(v);
                    let diff: f64 = img
                        .iter()
                        .zip(v.iter())
                        .map(|(a, b)| (*a - *b).norm())
                        .fold(0.0, f64::max);
                    assert!(diff < 1e-10, "jacquet vector not invariant");
                }
            }
            // dimension is exactly 2: averaging projector has rank 2
            let mats: Vec<Mat<f64>> = radical
                .iter()
                .map(|u| model.action_matrix::<f64>(&field, &line, u))
                .collect();
            let proj = super::super::averaging_projector(&mats);
            assert_eq!(proj.rank(1e-9), 2);
            // v1, v2 independent
            let mut two = Mat::zeros(2, line.len());
            for (j, v) in [&v1, &v2].into_iter().enumerate() {
                for (i, &x) in v.iter().enumerate() {
                    two[(j, i)] = x;
                }
            }
            assert_eq!(two.rank(1e-9), 2);
        }
    }
}
