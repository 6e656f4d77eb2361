//! Closed-form check of the solved family against the propagation formula:
//! at depth `k` the form is `(-1)^(k-1) (Q+1) / (2 Q^k)` times the value gap
//! at the root times evaluation at the parent line.

use super::Layout;
use crate::ffchar::{FiniteField, PairData};
use crate::gl2fq::{norm_to_k_square_class, NonsplitTorus, ProjLine};
use crate::repmodels::Component;
use crate::scalar::{Scalar, C};
use num_traits::Zero;

/// Maximum absolute deviation between the witness and the closed form, over
/// all Steinberg components, all classes up to the radius, and a spanning
/// set of test vectors; includes the root-level kernel shape check.
pub fn check_propagation_formula<F: Scalar>(
    pair: &PairData,
    field: &FiniteField,
    layout: &Layout,
    witness: &[C<F>],
) -> f64 {
    check_propagation_formula_signed(pair, field, layout, witness, false)
}

/// Same check with an optionally negated coefficient; the flipped variant
/// exists so the suite can demonstrate that a wrong sign is caught.
pub fn check_propagation_formula_signed<F: Scalar>(
    pair: &PairData,
    field: &FiniteField,
    layout: &Layout,
    witness: &[C<F>],
    flip_sign: bool,
) -> f64 {
    let line = ProjLine::new(field);
    let torus = NonsplitTorus::new(field);
    let table = crate::gl2fq::torus_acts_simply_transitively(field, &torus);
    let reps = torus.coset_reps(field);
    let q = pair.params.q;
    let n = line.len();
    let big_q = F::from_f64c((n - 1) as f64);

    // sign class of each line through the coset carrying the base line to it
    let signs: Vec<i32> = (0..n)
        .map(|d| norm_to_k_square_class(&torus, field, reps[table.coset_for_point[d]], q))
        .collect();

    let mut max_resid = 0.0f64;
    for nu in 0..pair.f {
        let comp = Component::Steinberg { nu };
        let phi0 = layout.block(witness, 0, comp);
        // root kernel shape: the dual is constant on each sign class
        let (mut plus, mut minus) = (None, None);
        for d in 0..n {
            let slot = if signs[d] == 1 { &mut plus } else { &mut minus };
            match slot {
                None => *slot = Some(phi0[d]),
                Some(v) => {
                    let r = (phi0[d] - *v).norm().to_f64().unwrap_or(f64::NAN);
                    max_resid = max_resid.max(r);
                }
            }
        }
        let gap = plus.unwrap() - minus.unwrap();
        // depth k: phi_k = coeff_k * gap * (evaluation at the parent line),
        // i.e. the dual block is coeff_k * gap * e_{parent} modulo constants
        for class in 1..layout.classes {
            let k = class as i32;
            let mut sign = if (k - 1) % 2 == 0 { 1.0 } else { -1.0 };
            if flip_sign {
                sign = -sign;
            }
            let coeff = F::from_f64c(sign * (n as f64) / 2.0)
                / big_q.powi(k);
            let phik = layout.block(witness, class, comp);
            // compare against the zero-sum test vectors h_j = e_j - e_{n-1}
            for j in 0..n - 1 {
                let actual = phik[j] - phik[n - 1];
                let expect = if j == n - 1 {
                    C::zero()
                } else {
                    // h_j(parent) = h_j(e_{n-1}-slot) = -1 for every j < n-1
                    -C::new(coeff, F::zero()) * gap
                };
                let r = (actual - expect).norm().to_f64().unwrap_or(f64::NAN);
                max_resid = max_resid.max(r);
            }
        }
    }
    max_resid
}
