//! The acceptance suite: every criterion as an executable check with its
//! stated tolerance pinned in code. Used by the `acceptance` test target and
//! by the CLI verification mode.

use crate::angle::RationalAngle;
use crate::distinction::{
    assemble, brute_force_oracle, check_propagation_formula_signed, run_distinction, solve,
    steinberg_case, unramified_steinberg_nullity, OracleOptions, Verdict,
};
use crate::ffchar::{
    build_pair_data, regular_orbit_representatives, FieldParams,
    FiniteField, MulCharacter, PairData, TameCharacter,
};
use crate::gl2fq::{
    count_square_norm_cosets, Gl2Element, NonsplitTorus,
    torus_acts_simply_transitively,
};
use crate::jl::{jl_agreement_report, kable_exclusion_check, Agreement, EtaData};
use crate::repmodels::{
    build_j, induced_hom_dim_torus, induced_inner_product_mirabolic, j_intertwines,
    s1_s2_vanishing, steinberg_hom_dim_torus, triviality_forces_halfshift,
};
use crate::treeorbits::{RamificationCase, TruncatedTree};
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::time::Instant;

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub id: u32,
    pub anchor: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Copy)]
pub struct SuiteOptions {
    /// Seed for the sampled matrix-identity spot checks.
    pub spot_check_seed: u64,
    /// Negates the propagation coefficient to prove the check has teeth.
    pub flip_propagation_sign: bool,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            spot_check_seed: 7,
            flip_propagation_sign: false,
        }
    }
}

fn pair_of(q: u64, delta: u32, f: u32, exp: u64) -> PairData {
    let params = FieldParams::from_q(q, delta).unwrap();
    let chi_f = TameCharacter::new(MulCharacter::new(q.pow(f) - 1, exp), RationalAngle::ZERO);
    build_pair_data(&params, f, chi_f).unwrap()
}

fn admissible_orbits(q: u64, delta: u32) -> Vec<(u32, u64)> {
    let d = 2 * delta;
    let mut out = Vec::new();
    for f in 1..=delta {
        if !d.is_multiple_of(f) || !(d / f).is_multiple_of(2) {
            continue;
        }
        for exp in regular_orbit_representatives(q, f) {
            out.push((f, exp));
        }
    }
    out
}

/// Runs all acceptance criteria and returns one result per criterion.
pub fn run_acceptance(options: SuiteOptions) -> Vec<CheckResult> {
    vec![
        criterion_1(),
        criterion_2(),
        criterion_3(),
        criterion_4(),
        criterion_5(),
        criterion_6(options),
        criterion_7(),
        criterion_8(options),
        criterion_9(),
        criterion_10(),
        criterion_11(),
        criterion_12(),
    ]
}

fn criterion_1() -> CheckResult {
    let mut pass = true;
    let mut detail = String::new();
    for q in [3u64, 5, 9] {
        let field = FiniteField::of_order(q).unwrap();
        let torus = NonsplitTorus::new(&field);
        let table = torus_acts_simply_transitively(&field, &torus);
        let ok = table.simply_transitive && table.coset_for_point.len() as u64 == q + 1;
        pass &= ok;
        detail.push_str(&format!("Q={q}: orbit {} ", table.coset_for_point.len()));
    }
    CheckResult {
        id: 1,
        anchor: "SimpleTransitiviteToreNonDeploye".into(),
        pass,
        detail,
    }
}

fn criterion_2() -> CheckResult {
    let mut pass = true;
    let mut detail = String::new();
    for q in [3u64, 5, 9, 27] {
        let field = FiniteField::of_order(q).unwrap();
        let r = count_square_norm_cosets(&field, field.p) as u64;
        let ok = r == q.div_ceil(2);
        pass &= ok;
        detail.push_str(&format!("Q={q}: r={r} "));
    }
    CheckResult {
        id: 2,
        anchor: "LemmeComptageClassesNormeCarree".into(),
        pass,
        detail,
    }
}

fn criterion_3() -> CheckResult {
    let mut pass = true;
    let mut detail = String::new();
    for big_q in [3u64, 9, 27] {
        let field = FiniteField::of_order(big_q).unwrap();
        let q = field.p; // base residue cardinality for these runs
        let n = big_q - 1;
        let mut st_checked = 0;
        for e in 0..n {
            let chi0 = MulCharacter::new(n, e);
            let restricted = MulCharacter::new(q - 1, e % (q - 1));
            match steinberg_hom_dim_torus::<f64>(&field, q, &chi0) {
                Ok(dim) => {
                    // two-route agreement is enforced inside; the dichotomy
                    // applies on the central-condition range
                    if restricted.order() <= 2 {
                        let expect = if restricted.is_trivial() { 0 } else { 1 };
                        if dim.dim() != expect {
                            pass = false;
                        }
                        st_checked += 1;
                    } else if dim.dim() != 0 {
                        pass = false;
                    }
                }
                Err(_) => pass = false,
            }
        }
        let mut ind_checked = 0;
        for e1 in 0..n {
            for e2 in 0..n {
                if e1 == e2 {
                    continue;
                }
                let c1 = MulCharacter::new(n, e1);
                let c2 = MulCharacter::new(n, e2);
                match induced_hom_dim_torus::<f64>(&field, &c1, &c2) {
                    Ok(dim) => {
                        let expect = if c1.mul(&c2).is_trivial() { 1 } else { 0 };
                        if dim.dim() != expect {
                            pass = false;
                        }
                        ind_checked += 1;
                    }
                    Err(_) => pass = false,
                }
            }
        }
        detail.push_str(&format!("Q={big_q}: st {st_checked}, ind {ind_checked}; "));
    }
    CheckResult {
        id: 3,
        anchor: "DimensionEntrelacementSteinberg/DimensionEntrelacementInduite".into(),
        pass,
        detail,
    }
}

fn criterion_4() -> CheckResult {
    let mut pass = true;
    let mut detail = String::new();
    for big_q in [3u64, 9] {
        let field = FiniteField::of_order(big_q).unwrap();
        let n = big_q - 1;
        let mut checked = 0;
        for e1 in 0..n {
            for e2 in 0..n {
                if e1 == e2 {
                    continue;
                }
                let v = induced_inner_product_mirabolic(
                    &field,
                    &MulCharacter::new(n, e1),
                    &MulCharacter::new(n, e2),
                );
                let expect = if (e1 + e2) % n == 0 { 2 } else { 0 };
                if v != Ratio::from_integer(expect as i128) {
                    pass = false;
                }
                checked += 1;
            }
        }
        detail.push_str(&format!("Q={big_q}: {checked} pairs; "));
    }
    CheckResult {
        id: 4,
        anchor: "LemmeProduitScalaireKs1".into(),
        pass,
        detail,
    }
}

fn criterion_5() -> CheckResult {
    let mut pass = true;
    let mut detail = String::new();
    for (q, big_q) in [(3u64, 9u64), (3, 27)] {
        let n = big_q - 1;
        let mut checked = 0;
        for e in 0..n {
            let chi0 = MulCharacter::new(n, e);
            let f = crate::ffchar::frobenius_orbit_length(&chi0, q);
            if !triviality_forces_halfshift(q, &chi0, f) {
                pass = false;
            }
            checked += 1;
        }
        detail.push_str(&format!("Q={big_q}: {checked} characters; "));
    }
    CheckResult {
        id: 5,
        anchor: "PropTrivialiteForceDemiDecalage".into(),
        pass,
        detail,
    }
}

fn criterion_6(options: SuiteOptions) -> CheckResult {
    let pd = pair_of(3, 2, 2, 1);
    let field = FiniteField::of_order(9).unwrap();
    let mut pass = true;
    let mut detail = String::new();
    match build_j::<f64>(&field, &pd) {
        Ok(j) => {
            // J^e = Id
            let je = j.mat.pow(pd.e as u64);
            let r = je.max_abs_diff(&crate::linalg::Mat::identity(10));
            if r > 1e-9 {
                pass = false;
            }
            detail.push_str(&format!("|J^e - I| = {r:.2e}; "));
            // intertwining identity on all generators and 100 samples
            let gens = [
                Gl2Element::upper_unip(1),
                Gl2Element::upper_unip(3),
                Gl2Element::lower_unip(1),
                Gl2Element::lower_unip(3),
                Gl2Element::diag(field.generator, 1),
                Gl2Element::diag(1, field.generator),
                Gl2Element::w(),
            ];
            let mut worst = 0.0f64;
            for g in gens {
                worst = worst.max(j_intertwines(&field, &pd, &j, &g));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(options.spot_check_seed);
            let mut sampled = 0;
            while sampled < 100 {
                let e = [
                    rng.gen_range(0..9u64),
                    rng.gen_range(0..9u64),
                    rng.gen_range(0..9u64),
                    rng.gen_range(0..9u64),
                ];
                let g = Gl2Element { e };
                if g.det(&field) == 0 {
                    continue;
                }
                worst = worst.max(j_intertwines(&field, &pd, &j, &g));
                sampled += 1;
            }
            if worst > 1e-9 {
                pass = false;
            }
            detail.push_str(&format!("intertwining residual {worst:.2e} over 100 samples"));
        }
        Err(e) => {
            pass = false;
            detail = format!("construction failed: {e}");
        }
    }
    CheckResult {
        id: 6,
        anchor: "TypeEtenduMaxfPair/OperateurJ".into(),
        pass,
        detail,
    }
}

fn criterion_7() -> CheckResult {
    let mut pass = true;
    let mut detail = String::new();
    let field = FiniteField::of_order(9).unwrap();
    for exp in regular_orbit_representatives(3, 2) {
        let pd = pair_of(3, 2, 2, exp);
        // exact vanishing sums on the orbits carrying a candidate form
        let product_trivial = pd.chi1_bar(0).mul(&pd.chi1_bar(1)).is_trivial();
        if product_trivial {
            let (s1, s2) = s1_s2_vanishing(&field, &pd);
            if !s1.is_zero() || !s2.is_zero() {
                pass = false;
            }
            detail.push_str(&format!("exp={exp}: S1=S2=0; "));
        }
        let report = run_distinction(&pd, 3).unwrap();
        for s in &report.solver {
            if s.nullity != 0 {
                pass = false;
            }
        }
        detail.push_str(&format!(
            "exp={exp}: nullity {:?}; ",
            report.solver.iter().map(|s| s.nullity).collect::<Vec<_>>()
        ));
    }
    CheckResult {
        id: 7,
        anchor: "NonDistinctionCasfPair/ConclusionCNDistinction".into(),
        pass,
        detail,
    }
}

fn criterion_8(options: SuiteOptions) -> CheckResult {
    let start = Instant::now();
    let pd = pair_of(3, 3, 3, 1);
    let field = FiniteField::of_order(27).unwrap();
    let mut pass = true;
    let mut detail = String::new();
    let tree = TruncatedTree::build_ramified(28, 3).unwrap();
    let sys = assemble::<f64>(&pd, &field, &tree).unwrap();
    let (nullity, witness) = solve(&sys);
    detail.push_str(&format!("nullity(R=3) = {nullity}; "));
    if nullity == 1 {
        let w = witness.unwrap();
        let resid = check_propagation_formula_signed(
            &pd,
            &field,
            &sys.layout,
            &w,
            options.flip_propagation_sign,
        );
        if resid >= 1e-8 {
            pass = false;
        }
        detail.push_str(&format!("max residual {resid:.2e}; "));
    } else {
        pass = false;
    }
    let secs = start.elapsed().as_secs_f64();
    if secs >= 60.0 {
        pass = false;
    }
    detail.push_str(&format!("{secs:.1}s"));
    CheckResult {
        id: 8,
        anchor: "ConclusionCNDistinction/FormulePropagation".into(),
        pass,
        detail,
    }
}

fn criterion_9() -> CheckResult {
    let mut pass = true;
    let mut detail = String::new();
    for delta in [1u32, 2, 3] {
        for (f, exp) in admissible_orbits(3, delta) {
            let pd = pair_of(3, delta, f, exp);
            if !pd.central_residue_trivial() {
                continue;
            }
            let report = run_distinction(&pd, 3).unwrap();
            let mut prev = usize::MAX;
            for s in &report.solver {
                if s.nullity > 1 || s.nullity > prev {
                    pass = false;
                    detail.push_str(&format!("violation at delta={delta} f={f} exp={exp}; "));
                }
                prev = s.nullity;
            }
        }
        detail.push_str(&format!("delta={delta} ok; "));
    }
    CheckResult {
        id: 9,
        anchor: "TheoremeMultiplicite1NonCusp".into(),
        pass,
        detail,
    }
}

fn criterion_10() -> CheckResult {
    let mut pass = true;
    let mut detail = String::new();
    for delta in [1u32, 2] {
        let params = FieldParams::from_q(3, delta).unwrap();
        let report = steinberg_case(&params, RamificationCase::Ramified, 0, 3).unwrap();
        if report.verdict != Verdict::NotDistinguished {
            pass = false;
        }
        detail.push_str(&format!("ramified delta={delta}: {:?}; ", report.verdict));
    }
    for tdeg in [4usize, 10] {
        // the sign relation kills the root-edge line: rebuild at radius 1 and
        // confirm the sign row is what empties the kernel
        let with_sign = unramified_steinberg_nullity::<f64>(tdeg, 1).unwrap();
        if with_sign != 0 {
            pass = false;
        }
        let params = FieldParams::from_q(3, 1).unwrap();
        let report = steinberg_case(&params, RamificationCase::Unramified, tdeg, 3).unwrap();
        if report.verdict != Verdict::NotDistinguished {
            pass = false;
        }
        detail.push_str(&format!("unramified tdeg={tdeg}: {:?}; ", report.verdict));
    }
    CheckResult {
        id: 10,
        anchor: "TheoremeNonDistinctionSteinbergTotRam/NonRam".into(),
        pass,
        detail,
    }
}

fn criterion_11() -> CheckResult {
    let mut pass = true;
    let mut detail = String::new();
    // exhaustive scan: residue exponents times tenth-root uniformizer values
    let params = FieldParams::from_q(3, 2).unwrap();
    let eta = EtaData::new(3);
    let mut scanned = 0;
    for exp in 0..8u64 {
        for k in 0..10i64 {
            let chi_f =
                TameCharacter::new(MulCharacter::new(8, exp), RationalAngle::new(k, 10));
            let Ok(pd) = build_pair_data(&params, 2, chi_f) else {
                continue;
            };
            if !kable_exclusion_check(&pd, &eta) {
                pass = false;
            }
            let dx = run_distinction(&pd, 2).unwrap();
            let report = jl_agreement_report(&pd, dx.verdict);
            if !report.dx_side_not_distinguished
                || report.split_side_distinguished
                || report.agreement != Agreement::AgreementProven
            {
                pass = false;
                detail.push_str(&format!("disagreement at exp={exp} k={k}; "));
            }
            scanned += 1;
        }
    }
    detail.push_str(&format!("{scanned} even-orbit pairs; "));
    // the Steinberg pair
    let pd = pair_of(3, 2, 1, 0);
    let dx = run_distinction(&pd, 2).unwrap();
    let report = jl_agreement_report(&pd, dx.verdict);
    if report.split_side_distinguished || report.agreement != Agreement::AgreementProven {
        pass = false;
    }
    detail.push_str("steinberg pair agreement proven");
    CheckResult {
        id: 11,
        anchor: "JacquetLanglandsNonDistinctionfPair/NonDistinctionSteinbergEtJL".into(),
        pass,
        detail,
    }
}

fn criterion_12() -> CheckResult {
    let mut pass = true;
    let mut detail = String::new();
    for delta in [1u32, 2] {
        for (f, exp) in admissible_orbits(3, delta) {
            let pd = pair_of(3, delta, f, exp);
            if !pd.central_residue_trivial() {
                continue;
            }
            let report = run_distinction(&pd, 1).unwrap();
            let oracle = brute_force_oracle(&pd, 1, OracleOptions::default()).unwrap();
            if report.solver[0].nullity != oracle {
                pass = false;
                detail.push_str(&format!(
                    "mismatch delta={delta} f={f} exp={exp}: {} vs {oracle}; ",
                    report.solver[0].nullity
                ));
            }
        }
        detail.push_str(&format!("delta={delta} ok; "));
    }
    CheckResult {
        id: 12,
        anchor: "OracleEquivalence".into(),
        pass,
        detail,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_criteria_pass() {
        // the cheap criteria run in unit-test time; the heavy ones live in
        // the integration acceptance target
        assert!(criterion_1().pass);
        assert!(criterion_2().pass);
        assert!(criterion_4().pass);
        assert!(criterion_5().pass);
        assert!(criterion_6(SuiteOptions::default()).pass);
    }

    #[test]
    fn propagation_sign_mutation_fails_exactly_that_check() {
        let mutated = criterion_8(SuiteOptions {
            flip_propagation_sign: true,
            ..Default::default()
        });
        assert!(!mutated.pass, "flipped sign must be caught");
        let honest = criterion_8(SuiteOptions::default());
        assert!(honest.pass);
    }
}
