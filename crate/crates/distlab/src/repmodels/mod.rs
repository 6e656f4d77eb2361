//! Matrix models of the residue-level components: twisted Steinberg
//! representations and parabolically induced blocks, with Jacquet subspaces,
//! exact character sums, averaging projectors, the Whittaker vector and the
//! intertwining operator of the extended type.

mod induced;
mod intertwiner;
mod steinberg;

pub use induced::InducedModel;
pub use intertwiner::{build_j, j_intertwines, s1_s2_vanishing, whittaker_vector, IntertwinerJ};
pub use steinberg::{restrict_zero_sum, steinberg_jacquet_full, SteinbergModel};

use crate::angle::{CycloSum, RationalAngle};
use crate::ffchar::{FiniteField, MulCharacter, PairData};
use crate::gl2fq::{NonsplitTorus, ProjLine};
use crate::linalg::Mat;
use crate::scalar::{Scalar, C};
use num_rational::Ratio;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("character sum {0} is not an integer within exact arithmetic")]
    IntegralityViolation(String),
    #[error("projector rank {rank} disagrees with character sum {char_sum}")]
    RankCharacterMismatch { rank: usize, char_sum: i128 },
    #[error("intertwiner does not fix the Whittaker vector (residual {0})")]
    NormalizationFailure(f64),
}

/// One irreducible component of the residue-level space at a vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Component {
    Steinberg { nu: u32 },
    Induced { nu1: u32, nu2: u32 },
}

impl Component {
    pub fn dim(&self, big_q: u64) -> usize {
        match self {
            Component::Steinberg { .. } => big_q as usize,
            Component::Induced { .. } => big_q as usize + 1,
        }
    }
}

/// A labeled component together with its twisting characters.
#[derive(Debug, Clone)]
pub struct LabeledComponent {
    pub component: Component,
    pub dim: usize,
    pub chars: Vec<MulCharacter>,
}

/// The component list of the vertex space: `f` Steinberg twists and
/// `C(f,2)` induced blocks; total dimension `f*Q + C(f,2)*(Q+1)`.
pub fn decompose_vs(pair: &PairData) -> Vec<LabeledComponent> {
    let big_q = pair.params.big_q;
    let mut out = Vec::new();
    for nu in 0..pair.f {
        out.push(LabeledComponent {
            component: Component::Steinberg { nu },
            dim: big_q as usize,
            chars: vec![pair.chi1_bar(nu)],
        });
    }
    for nu1 in 0..pair.f {
        for nu2 in (nu1 + 1)..pair.f {
            out.push(LabeledComponent {
                component: Component::Induced { nu1, nu2 },
                dim: big_q as usize + 1,
                chars: vec![pair.chi1_bar(nu1), pair.chi1_bar(nu2)],
            });
        }
    }
    out
}

pub fn total_dimension(pair: &PairData) -> u64 {
    let f = pair.f as u64;
    let big_q = pair.params.big_q;
    f * big_q + f * (f - 1) / 2 * (big_q + 1)
}

/// A monomial operator `e_c -> factor[c] * e_{perm[c]}` with exact root-of-
/// unity factors; the common currency between exact character sums and the
/// floating-point matrices.
#[derive(Debug, Clone)]
pub struct Monomial {
    pub perm: Vec<usize>,
    pub factors: Vec<RationalAngle>,
}

impl Monomial {
    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    pub fn to_mat<F: Scalar>(&self) -> Mat<F> {
        let n = self.dim();
        let mut m = Mat::zeros(n, n);
        for c in 0..n {
            m[(self.perm[c], c)] = self.factors[c].to_complex();
        }
        m
    }

    /// Exact trace: sum of factors over fixed indices.
    pub fn trace_exact(&self) -> CycloSum {
        let mut s = CycloSum::zero();
        for c in 0..self.dim() {
            if self.perm[c] == c {
                s.add_unit(self.factors[c]);
            }
        }
        s
    }
}

/// Result of a two-route invariant-dimension computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InvariantDim {
    pub projector_rank: usize,
    pub char_sum: i128,
}

impl InvariantDim {
    pub fn dim(&self) -> usize {
        self.projector_rank
    }
}

fn check_two_routes(rank: usize, sum: CycloSum, size: u64) -> Result<InvariantDim, ModelError> {
    let mut sum = sum;
    sum.scale(Ratio::new(1, size as i128));
    let char_sum = sum
        .as_integer()
        .ok_or_else(|| ModelError::IntegralityViolation(format!("{sum:?}")))?;
    if char_sum < 0 || rank != char_sum as usize {
        return Err(ModelError::RankCharacterMismatch { rank, char_sum });
    }
    Ok(InvariantDim {
        projector_rank: rank,
        char_sum,
    })
}

/// Average of a family of operators.
pub fn averaging_projector<F: Scalar>(mats: &[Mat<F>]) -> Mat<F> {
    let n = mats[0].nrows;
    let mut acc = Mat::zeros(n, n);
    for m in mats {
        acc.add_scaled(m, C::new(F::one(), F::zero()));
    }
    acc.scale(C::new(
        F::one() / F::from_f64c(mats.len() as f64),
        F::zero(),
    ));
    acc
}

/// Dimension of the invariants of the twisted Steinberg component under the
/// nonsplit torus, computed both as the rank of the averaging projector and
/// as the exact character sum. The torus acts through the square-class sign
/// of its norm down to the subfield of order `q` times the permutation
/// action on the lines.
pub fn steinberg_hom_dim_torus<F: Scalar>(
    field: &FiniteField,
    q: u64,
    chi0: &MulCharacter,
) -> Result<InvariantDim, ModelError> {
    let torus = NonsplitTorus::new(field);
    let line = ProjLine::new(field);
    let model = SteinbergModel::new(*chi0);
    let elems = torus.elements(field);
    let mut mats = Vec::with_capacity(elems.len());
    let mut char_sum = CycloSum::zero();
    for &t in &elems {
        let g = torus.matrix(field, t);
        let twist = model.torus_twist(field, &torus, t, q);
        let mono = model.full_monomial_with_factor(field, &line, &g, twist);
        let fixed = mono
            .perm
            .iter()
            .enumerate()
            .filter(|&(c, &p)| p == c)
            .count() as i128;
        // character of the twisted Steinberg: twist * (#fixed - 1)
        char_sum.add_root(twist, Ratio::from_integer(fixed - 1));
        mats.push(restrict_zero_sum(&mono.to_mat::<F>()));
    }
    let proj = averaging_projector(&mats);
    let rank = proj.rank(F::rank_tol());
    check_two_routes(rank, char_sum, elems.len() as u64)
}

/// Dimension of the invariants of an induced block under the nonsplit torus
/// acting by right translation, by projector rank and exact character sum.
pub fn induced_hom_dim_torus<F: Scalar>(
    field: &FiniteField,
    chi1: &MulCharacter,
    chi2: &MulCharacter,
) -> Result<InvariantDim, ModelError> {
    let torus = NonsplitTorus::new(field);
    let line = ProjLine::new(field);
    let model = InducedModel::new(*chi1, *chi2);
    let elems = torus.elements(field);
    let mut mats = Vec::with_capacity(elems.len());
    let mut char_sum = CycloSum::zero();
    for &t in &elems {
        let g = torus.matrix(field, t);
        let mono = model.monomial(field, &line, &g);
        for (a, c) in mono.trace_exact().terms_vec() {
            char_sum.add_root(a, c);
        }
        mats.push(mono.to_mat::<F>());
    }
    let proj = averaging_projector(&mats);
    let rank = proj.rank(F::rank_tol());
    check_two_routes(rank, char_sum, elems.len() as u64)
}

/// Dimension of the invariants of an induced block under the mirabolic-like
/// stabilizer group, by projector rank and exact character sum.
pub fn induced_hom_dim_mirabolic<F: Scalar>(
    field: &FiniteField,
    chi1: &MulCharacter,
    chi2: &MulCharacter,
) -> Result<InvariantDim, ModelError> {
    let line = ProjLine::new(field);
    let model = InducedModel::new(*chi1, *chi2);
    let k = crate::gl2fq::MirabolicLike::new(field);
    let elems = k.elements(field);
    let mut mats = Vec::with_capacity(elems.len());
    let mut char_sum = CycloSum::zero();
    for g in &elems {
        let mono = model.monomial(field, &line, g);
        for (a, c) in mono.trace_exact().terms_vec() {
            char_sum.add_root(a, c);
        }
        mats.push(mono.to_mat::<F>());
    }
    let proj = averaging_projector(&mats);
    let rank = proj.rank(F::rank_tol());
    check_two_routes(rank, char_sum, elems.len() as u64)
}

/// Exact inner product of the induced-block character with the trivial
/// character of the mirabolic-like group: `2/(Q-1) * sum_u chi1*chi2(u)`,
/// evaluated by the direct double sum over the group.
pub fn induced_inner_product_mirabolic(
    field: &FiniteField,
    chi1: &MulCharacter,
    chi2: &MulCharacter,
) -> Ratio<i128> {
    let line = ProjLine::new(field);
    let model = InducedModel::new(*chi1, *chi2);
    let k = crate::gl2fq::MirabolicLike::new(field);
    let elems = k.elements(field);
    let mut acc = CycloSum::zero();
    for g in &elems {
        let tr = model.monomial(field, &line, g).trace_exact();
        for (a, c) in tr.terms_vec() {
            acc.add_root(a, c);
        }
    }
    acc.scale(Ratio::new(1, elems.len() as i128));
    acc.as_rational()
        .expect("inner product with the trivial character is rational")
}

/// Table of which induced blocks have their product character trivial on the
/// coefficient-field units, plus verification of the half-shift law: this
/// happens only when `f` is even, `nu2 = nu1 + f/2`, and `chi0` is trivial on
/// the subfield of order `q^(f/2)`.
pub fn triviality_forces_halfshift(q: u64, chi0: &MulCharacter, f: u32) -> bool {
    let n = chi0.modulus;
    for nu1 in 0..f {
        for nu2 in (nu1 + 1)..f {
            let prod = chi0
                .frobenius_twist(q, nu1)
                .mul(&chi0.frobenius_twist(q, nu2));
            let trivial = prod.is_trivial();
            let halfshift = f.is_multiple_of(2) && nu2 == nu1 + f / 2;
            let chi0_half_trivial = if f.is_multiple_of(2) {
                let s = {
                    // subfield of order q^(f/2); its units have order q^(f/2)-1
                    let mut t = 1u64;
                    for _ in 0..f / 2 {
                        t *= q;
                    }
                    t
                };
                n.is_multiple_of(s - 1)
                    && (chi0.exponent as u128 * (n / (s - 1)) as u128).is_multiple_of(n as u128)
            } else {
                false
            };
            if trivial != (halfshift && chi0_half_trivial) {
                return false;
            }
        }
    }
    true
}

/// Character values of the plain Steinberg representation on the embedded
/// torus: `Q` on central elements, `-1` on the elliptic-regular rest.
pub fn steinberg_character_on_torus(field: &FiniteField) -> bool {
    let torus = NonsplitTorus::new(field);
    let line = ProjLine::new(field);
    let q1 = field.order as i128;
    for t in torus.elements(field) {
        let g = torus.matrix(field, t);
        let fixed = line
            .permutation(field, &g)
            .iter()
            .enumerate()
            .filter(|&(c, &p)| p == c)
            .count() as i128;
        let value = fixed - 1;
        let expect = if t.is_central() { q1 } else { -1 };
        if value != expect {
            return false;
        }
    }
    true
}

/// The square-class sign of a torus element used by the Steinberg twist.
pub fn torus_sign(
    field: &FiniteField,
    torus: &NonsplitTorus,
    t: crate::gl2fq::TorusElement,
    q: u64,
    chi0: &MulCharacter,
) -> RationalAngle {
    let n = torus.norm_to_base(field, t, q);
    chi0.eval(field, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffchar::{build_pair_data, FieldParams, TameCharacter};

    fn pair_q3d2_f2(exp: u64) -> PairData {
        let params = FieldParams::new(3, 1, 2).unwrap();
        let chi_f = TameCharacter::new(MulCharacter::new(8, exp), RationalAngle::ZERO);
        build_pair_data(&params, 2, chi_f).unwrap()
    }

    #[test]
    fn decompose_dimensions() {
        // f=1: one Steinberg twist, no induced blocks
        let params = FieldParams::new(3, 1, 1).unwrap();
        let chi_f = TameCharacter::trivial(2);
        let pd = build_pair_data(&params, 1, chi_f).unwrap();
        let comps = decompose_vs(&pd);
        assert_eq!(comps.len(), 1);
        assert_eq!(total_dimension(&pd), 3);

        // f=2, Q=9: two Steinberg twists and one induced block, total 28
        let pd = pair_q3d2_f2(1);
        let comps = decompose_vs(&pd);
        assert_eq!(comps.len(), 3);
        assert_eq!(total_dimension(&pd), 2 * 9 + 10);

        // f=3, Q=27: 3 + 3 components, total 165
        let params = FieldParams::new(3, 1, 3).unwrap();
        let chi_f = TameCharacter::new(MulCharacter::new(26, 1), RationalAngle::ZERO);
        let pd = build_pair_data(&params, 3, chi_f).unwrap();
        assert_eq!(decompose_vs(&pd).len(), 6);
        assert_eq!(total_dimension(&pd), 3 * 27 + 3 * 28);
    }

    #[test]
    fn steinberg_torus_dims() {
        // chi0 trivial on k: dim 0; chi0 of order 2 on k: dim 1
        for big_q in [3u64, 9] {
            let field = FiniteField::of_order(big_q).unwrap();
            let n = big_q - 1;
            for e in 0..n {
                let chi0 = MulCharacter::new(n, e);
                // restriction to F_3 units has exponent e mod 2
                let ord = MulCharacter::new(3 - 1, e % 2).order();
                if ord > 2 {
                    continue;
                }
                let d = steinberg_hom_dim_torus::<f64>(&field, 3, &chi0).unwrap();
                let expect = if ord == 1 { 0 } else { 1 };
                assert_eq!(d.dim(), expect, "Q={big_q} exp={e}");
            }
        }
    }

    #[test]
    fn induced_torus_dims() {
        let field = FiniteField::of_order(9).unwrap();
        let n = 8;
        for e1 in 0..n {
            for e2 in 0..n {
                if e1 == e2 {
                    continue;
                }
                let chi1 = MulCharacter::new(n, e1);
                let chi2 = MulCharacter::new(n, e2);
                let d = induced_hom_dim_torus::<f64>(&field, &chi1, &chi2).unwrap();
                let expect = if (e1 + e2) % n == 0 { 1 } else { 0 };
                assert_eq!(d.dim(), expect, "e1={e1} e2={e2}");
            }
        }
    }

    #[test]
    fn mirabolic_inner_product() {
        let field = FiniteField::of_order(9).unwrap();
        for e1 in 0..8u64 {
            for e2 in 0..8u64 {
                if e1 == e2 {
                    continue;
                }
                let v = induced_inner_product_mirabolic(
                    &field,
                    &MulCharacter::new(8, e1),
                    &MulCharacter::new(8, e2),
                );
                let expect = if (e1 + e2) % 8 == 0 { 2 } else { 0 };
                assert_eq!(v, Ratio::from_integer(expect as i128), "e1={e1} e2={e2}");
            }
        }
        // two-route dimension agrees with the exact inner product
        let d = induced_hom_dim_mirabolic::<f64>(
            &field,
            &MulCharacter::new(8, 1),
            &MulCharacter::new(8, 7),
        )
        .unwrap();
        assert_eq!(d.dim(), 2);
        let d = induced_hom_dim_mirabolic::<f64>(
            &field,
            &MulCharacter::new(8, 1),
            &MulCharacter::new(8, 2),
        )
        .unwrap();
        assert_eq!(d.dim(), 0);
    }

    #[test]
    fn induced_character_formula_matches_trace() {
        // conjugation-sum formula vs monomial trace, exhaustive for Q = 3
        // and on a deterministic stride for Q = 9
        for (q, stride) in [(3u64, 1usize), (9, 97)] {
            let field = FiniteField::of_order(q).unwrap();
            let line = ProjLine::new(&field);
            let model = InducedModel::new(
                MulCharacter::new(q - 1, 1),
                MulCharacter::new(q - 1, (q - 1) / 2),
            );
            let all = crate::gl2fq::enumerate_gl2(&field);
            let borel_order = ((q - 1) * (q - 1) * q) as f64;
            for g in all.iter().step_by(stride) {
                let trace: num_complex::Complex<f64> =
                    model.monomial(&field, &line, g).trace_exact().to_complex();
                let mut formula = num_complex::Complex::new(0.0, 0.0);
                for x in &all {
                    let conj = x.inv(&field).mul(&field, g).mul(&field, x);
                    if conj.is_upper_triangular() {
                        formula += (model.chi1.eval(&field, conj.e[0])
                            + model.chi2.eval(&field, conj.e[3]))
                        .to_complex::<f64>();
                    }
                }
                formula /= borel_order;
                assert!(
                    (trace - formula).norm() < 1e-8,
                    "character mismatch at {:?}",
                    g.e
                );
            }
        }
    }

    #[test]
    fn steinberg_jacquet_line_has_dim_one() {
        let field = FiniteField::of_order(9).unwrap();
        let line = ProjLine::new(&field);
        let model = SteinbergModel::new(MulCharacter::new(8, 0));
        for fixed_t in [0u64, 3] {
            let radical: Vec<crate::gl2fq::Gl2Element> = field
                .elements()
                .map(|u| {
                    // unipotent radical fixing the line (1:t): conjugate of
                    // the upper unipotents
                    let s = crate::gl2fq::Gl2Element::lower_unip(fixed_t);
                    s.mul(&field, &crate::gl2fq::Gl2Element::upper_unip(u))
                        .mul(&field, &s.inv(&field))
                })
                .collect();
            let mats: Vec<crate::linalg::Mat<f64>> = radical
                .iter()
                .map(|u| model.matrix_on_zero_sum::<f64>(&field, &line, u))
                .collect();
            let proj = averaging_projector(&mats);
            assert_eq!(proj.rank(1e-9), 1, "one line of invariants per line");
        }
    }

    #[test]
    fn halfshift_law() {
        // f=3, Q=27: no pair may be trivial
        for a in 0..26u64 {
            let chi0 = MulCharacter::new(26, a);
            if crate::ffchar::frobenius_orbit_length(&chi0, 3) == 3 {
                assert!(triviality_forces_halfshift(3, &chi0, 3));
            }
        }
        // f=2, Q=9 exponent 2 (trivial on F_3): pair (0,1) trivial; law holds
        assert!(triviality_forces_halfshift(3, &MulCharacter::new(8, 2), 2));
        let prod = MulCharacter::new(8, 2).mul(&MulCharacter::new(8, 2).frobenius_twist(3, 1));
        assert!(prod.is_trivial());
        // f=2, Q=9 exponent 1: no trivial pair
        assert!(triviality_forces_halfshift(3, &MulCharacter::new(8, 1), 2));
        let prod = MulCharacter::new(8, 1).mul(&MulCharacter::new(8, 1).frobenius_twist(3, 1));
        assert!(!prod.is_trivial());
    }

    #[test]
    fn steinberg_char_values() {
        for q in [3u64, 9] {
            let field = FiniteField::of_order(q).unwrap();
            assert!(steinberg_character_on_torus(&field));
        }
    }
}
