//! The intertwining operator of the extended type on the half-shift induced
//! block, the Whittaker vector it is normalized against, and the exact
//! brute-force vanishing sums that drive the even-orbit non-distinction.

use super::induced::InducedModel;
use super::ModelError;
use crate::angle::{CycloSum, RationalAngle};
use crate::ffchar::{FiniteField, PairData};
use crate::gl2fq::{bruhat_decompose, Bruhat, Gl2Element, NonsplitTorus, ProjLine, ProjPoint};
use crate::linalg::Mat;
use crate::scalar::{Scalar, C};
use num_rational::Ratio;
use num_traits::Zero;

/// The normalized intertwiner `J` on the block `U^{0, f/2}`, together with
/// the uniformizer scalar `zeta` and the Frobenius half-power it twists by.
#[derive(Debug, Clone)]
pub struct IntertwinerJ<F: Scalar> {
    pub mat: Mat<F>,
    pub zeta: RationalAngle,
    pub frob_half: u32,
    pub block_order: u32,
}

/// The Whittaker vector of the induced block in basis coordinates: the
/// function vanishing on the Borel with `f0(t u1 w u2) = chi(t) mu(u2)`,
/// where `mu` is the nondegenerate character built from the absolute trace.
pub fn whittaker_vector<F: Scalar>(
    field: &FiniteField,
    line: &ProjLine,
    model: &InducedModel,
) -> Vec<C<F>> {
    whittaker_angles(field, line, model)
        .into_iter()
        .map(|a| a.map_or_else(C::zero, |a| a.to_complex()))
        .collect()
}

fn whittaker_angles(
    field: &FiniteField,
    line: &ProjLine,
    model: &InducedModel,
) -> Vec<Option<RationalAngle>> {
    (0..line.len())
        .map(|c| {
            let r = model.rep_for_index(field, line, c);
            match bruhat_decompose(field, &r) {
                Bruhat::Borel(_) => None,
                Bruhat::Cell { t, u2, .. } => {
                    let chi_t = model.chi1.eval(field, t.e[0]) + model.chi2.eval(field, t.e[3]);
                    Some(chi_t + field.additive_char(u2.e[1]))
                }
            }
        })
        .collect()
}

/// Kernel function of the intertwiner: zero on the Borel, and on the dense
/// cell `F(t u1 w u2) = chi2(t1) chi1(t2) * F(w)` with `F(w) = -(Q+1)`.
fn kernel_f(
    field: &FiniteField,
    model: &InducedModel,
    g: &Gl2Element,
) -> Option<RationalAngle> {
    match bruhat_decompose(field, g) {
        Bruhat::Borel(_) => None,
        Bruhat::Cell { t, .. } => {
            Some(model.chi2.eval(field, t.e[0]) + model.chi1.eval(field, t.e[3]))
        }
    }
}

/// Builds `J = I o L_F` on the block with characters `(chi0, chi0^(Phi^(f/2)))`
/// and verifies `J f0 = f0`; the convolution collapses to
/// `(L_F h_c)(r_{c'}) = F(r_{c'} r_c^{-1})/(Q+1)` and `I` relabels the basis
/// by the half Frobenius.
pub fn build_j<F: Scalar>(field: &FiniteField, pair: &PairData) -> Result<IntertwinerJ<F>, ModelError> {
    assert!(pair.f_even(), "the intertwiner lives on the half-shift block");
    let q = pair.params.q;
    let half = pair.f / 2;
    let chi1 = pair.chi1_bar(0);
    let chi2 = pair.chi1_bar(half);
    let model = InducedModel::new(chi1, chi2);
    let line = ProjLine::new(field);
    let n = line.len();
    let frob_exp = q.pow(half);

    let mut mat = Mat::<F>::zeros(n, n);
    for c in 0..n {
        let rc_inv = model.rep_for_index(field, &line, c).inv(field);
        for cp in 0..n {
            let arg = model.rep_for_index(field, &line, cp).mul(field, &rc_inv);
            if let Some(angle) = kernel_f(field, &model, &arg) {
                // I relabels c' to its half-Frobenius image
                let p = line.points[cp];
                let target = ProjPoint::new(field, field.pow(p.x, frob_exp), field.pow(p.y, frob_exp));
                let row = line.index_of(target);
                // F(w)/(Q+1) = -(Q+1)/(Q+1) = -1
                mat[(row, c)] = -angle.to_complex::<F>();
            }
        }
    }

    // With the raw kernel the Whittaker vector is only an eigenvector (the
    // eigenvalue is a Gauss-sum scalar); normalize so that J f0 = f0.
    let f0 = whittaker_vector::<F>(field, &line, &model);
    let jf0 = mat.apply(&f0);
    let (mut num, mut den) = (C::<F>::zero(), C::<F>::zero());
    for (a, b) in jf0.iter().zip(&f0) {
        num = num + *a * b.conj();
        den = den + *b * b.conj();
    }
    let lambda = num / den;
    let inv_lambda: C<F> = C::new(F::one(), F::zero()) / lambda;
    mat.scale(inv_lambda);
    let jf0 = mat.apply(&f0);
    let resid = jf0
        .iter()
        .zip(&f0)
        .map(|(a, b)| (*a - *b).norm())
        .fold(F::zero(), F::max);
    if resid > F::rank_tol() {
        return Err(ModelError::NormalizationFailure(
            resid.to_f64().unwrap_or(f64::NAN),
        ));
    }
    Ok(IntertwinerJ {
        mat,
        zeta: pair.zeta(),
        frob_half: half,
        block_order: pair.e,
    })
}

/// Checks the intertwining identity `J o sigma(h) = sigma(Phi^(f/2) h) o J`
/// for one group element.
pub fn j_intertwines<F: Scalar>(
    field: &FiniteField,
    pair: &PairData,
    j: &IntertwinerJ<F>,
    h: &Gl2Element,
) -> F {
    let line = ProjLine::new(field);
    let model = InducedModel::new(pair.chi1_bar(0), pair.chi1_bar(pair.f / 2));
    let lhs = j.mat.matmul(&model.action_matrix(field, &line, h));
    let twisted = h.frobenius(field, pair.params.q, j.frob_half);
    let rhs = model.action_matrix::<F>(field, &line, &twisted).matmul(&j.mat);
    lhs.max_abs_diff(&rhs)
}

/// The two exact brute-force sums over the complement of the Borel whose
/// vanishing contradicts a nonzero invariant form on the half-shift block.
///
/// `phi~` is the canonical torus-invariant dual (value `chi^{-1}` of the
/// Borel part in the `B * torus` factorization) and the summand pairs it
/// against `J f~` where `f~` is the normalized Borel-supported vector. The
/// first sum runs over the cell with vanishing upper-left entry, the second
/// over the rest of the complement of the Borel.
pub fn s1_s2_vanishing(field: &FiniteField, pair: &PairData) -> (CycloSum, CycloSum) {
    assert!(pair.f_even());
    let q = pair.params.q;
    let half = pair.f / 2;
    let chi1 = pair.chi1_bar(0);
    let chi2 = pair.chi1_bar(half);
    assert!(
        chi1.mul(&chi2).is_trivial(),
        "half-shift block must have trivial product on the units"
    );
    assert_ne!(chi1, chi2, "regularity forces distinct halves");
    let torus = NonsplitTorus::new(field);
    let reps = torus.coset_reps(field);
    let model = InducedModel::new(chi1, chi2);
    let frob_inv_exp = {
        // x -> x^(q^(delta*2 - half)) inverts the half Frobenius on F_{Q}
        let delta = pair.params.delta;
        let total = delta; // Phi has order delta on the coefficient field
        let inv_pow = (total - (half % total)) % total;
        q.pow(inv_pow)
    };

    // phi~(g): factor g = m * b with m a torus coset and read chi^{-1} off
    // the Borel part; well defined because chi1*chi2 kills the units.
    let phi_dual = |g: &Gl2Element| -> RationalAngle {
        for m in &reps {
            let mm = torus.matrix(field, *m);
            let b = mm.inv(field).mul(field, g);
            if b.is_upper_triangular() {
                return (model.chi1.eval(field, b.e[0]) + model.chi2.eval(field, b.e[3])).neg();
            }
        }
        unreachable!("the group factors as torus times Borel");
    };

    // (J f~)(g) = F(Phi^{-f/2}(g)) * (-(Q+1)) / |G|, with F as in kernel_f
    let group_order = {
        let qe = field.order as i128;
        (qe * qe - 1) * (qe * qe - qe)
    };
    let j_ftilde = |g: &Gl2Element| -> Option<(RationalAngle, Ratio<i128>)> {
        let gphi = Gl2Element {
            e: [
                field.pow(g.e[0], frob_inv_exp),
                field.pow(g.e[1], frob_inv_exp),
                field.pow(g.e[2], frob_inv_exp),
                field.pow(g.e[3], frob_inv_exp),
            ],
        };
        kernel_f(field, &model, &gphi)
            .map(|angle| (angle, Ratio::new(-(field.order as i128 + 1), group_order)))
    };

    let mut s1 = CycloSum::zero();
    let mut s2 = CycloSum::zero();
    for a in field.elements() {
        for b in field.elements() {
            for c in field.elements() {
                if c == 0 {
                    continue; // complement of the Borel
                }
                for d in field.elements() {
                    let g = Gl2Element { e: [a, b, c, d] };
                    if g.det(field) == 0 {
                        continue;
                    }
                    if let Some((angle, coeff)) = j_ftilde(&g) {
                        let total = angle + phi_dual(&g);
                        if a == 0 {
                            s1.add_root(total, coeff);
                        } else {
                            s2.add_root(total, coeff);
                        }
                    }
                }
            }
        }
    }
    (s1, s2)
}
