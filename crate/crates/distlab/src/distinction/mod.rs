//! Assembly and solution of the linear constraint system on families of
//! invariant forms over the truncated tree, together with the brute-force
//! oracle and the special solver for the Steinberg representation.

mod assemble;
mod oracle;
mod propagation;
mod steinberg_case;

pub use assemble::{assemble, ConstraintSystem, Row, RowTag};
pub use oracle::{brute_force_oracle, OracleOptions};
pub use propagation::{check_propagation_formula, check_propagation_formula_signed};
pub use steinberg_case::{steinberg_case, unramified_steinberg_nullity};

use crate::ffchar::PairData;
use crate::linalg::Mat;
use crate::repmodels::Component;
use crate::scalar::{Scalar, C};
use crate::treeorbits::TruncatedTree;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DistinctionError {
    #[error("central character obstruction: residue trivial = {residue_ok}, uniformizer trivial = {unif_ok}")]
    CentralCharacterObstruction { residue_ok: bool, unif_ok: bool },
    #[error("tree case/degree does not match the pair")]
    TreeMismatch,
    #[error(transparent)]
    Model(#[from] crate::repmodels::ModelError),
    #[error(transparent)]
    Tree(#[from] crate::treeorbits::TreeError),
}

/// Solver verdicts. A nonzero kernel only certifies that the necessary
/// conditions are met, never sufficiency.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    NotDistinguished,
    Candidate,
}

/// Column layout of the constraint system: one dual vector per orbit class
/// and component, each of width `Q + 1`.
#[derive(Debug, Clone)]
pub struct Layout {
    pub big_q: usize,
    pub classes: usize,
    pub comps: Vec<Component>,
}

impl Layout {
    pub fn new(pair: &PairData, radius: u32) -> Self {
        let comps = crate::repmodels::decompose_vs(pair)
            .into_iter()
            .map(|c| c.component)
            .collect();
        Layout {
            big_q: pair.params.big_q as usize,
            classes: radius as usize + 1,
            comps,
        }
    }

    pub fn block_width(&self) -> usize {
        self.big_q + 1
    }

    pub fn comp_index(&self, comp: Component) -> usize {
        self.comps
            .iter()
            .position(|&c| c == comp)
            .expect("component in layout")
    }

    pub fn col(&self, class: usize, comp: Component, coord: usize) -> usize {
        debug_assert!(class < self.classes && coord < self.block_width());
        (class * self.comps.len() + self.comp_index(comp)) * self.block_width() + coord
    }

    pub fn total_cols(&self) -> usize {
        self.classes * self.comps.len() * self.block_width()
    }

    /// The dual block of `witness` at `(class, comp)`.
    pub fn block<'a, F: Scalar>(
        &self,
        witness: &'a [C<F>],
        class: usize,
        comp: Component,
    ) -> &'a [C<F>] {
        let start = self.col(class, comp, 0);
        &witness[start..start + self.block_width()]
    }
}

/// Solves the assembled system: the nullity bounds the dimension of the
/// space of invariant forms at this truncation radius, and a kernel vector
/// is returned as witness when one exists.
pub fn solve<F: Scalar>(sys: &ConstraintSystem<F>) -> (usize, Option<Vec<C<F>>>) {
    let rows: Vec<Vec<C<F>>> = sys.rows.iter().map(|r| r.coeffs.clone()).collect();
    if rows.is_empty() {
        return (sys.layout.total_cols(), None);
    }
    let mat = Mat::from_rows(rows);
    let kernel = mat.nullspace(F::rank_tol());
    let witness = kernel.first().cloned();
    (kernel.len(), witness)
}

/// Per-radius solver outcome bundled for reporting.
#[derive(Debug, Clone, Serialize)]
pub struct SolverOutcome {
    pub radius: u32,
    pub nullity: usize,
}

/// Full report of one distinction run.
#[derive(Debug, Clone, Serialize)]
pub struct DistinctionReport {
    pub case: String,
    pub f: u32,
    pub big_q: u64,
    pub chi0_exponent: u64,
    pub chi0_order_on_k: u64,
    pub central_residue_trivial: bool,
    pub central_unif_trivial: bool,
    pub solver: Vec<SolverOutcome>,
    pub verdict: Verdict,
    pub verdict_reason: String,
    /// Kernel vector at the final radius, flattened as (re, im) pairs.
    pub witness: Option<Vec<(f64, f64)>>,
    pub propagation_residual: Option<f64>,
    pub row_counts: Vec<(String, usize)>,
    pub timing_ms: u128,
}

/// Runs the ramified pipeline at radii `1..=radius` and aggregates verdicts.
pub fn run_distinction(pair: &PairData, radius: u32) -> Result<DistinctionReport, DistinctionError> {
    assert!(radius >= 1, "a verdict needs at least one truncation radius");
    let start = std::time::Instant::now();
    let residue_ok = pair.central_residue_trivial();
    let unif_ok = pair.central_unif_trivial();
    if !residue_ok || !unif_ok {
        return Ok(DistinctionReport {
            case: "ramified".into(),
            f: pair.f,
            big_q: pair.params.big_q,
            chi0_exponent: pair.chi0_bar.exponent,
            chi0_order_on_k: pair.chi0_order_on_k(),
            central_residue_trivial: residue_ok,
            central_unif_trivial: unif_ok,
            solver: Vec::new(),
            verdict: Verdict::NotDistinguished,
            verdict_reason: "central character not trivial on the base field".into(),
            witness: None,
            propagation_residual: None,
            row_counts: Vec::new(),
            timing_ms: start.elapsed().as_millis(),
        });
    }
    let field = crate::ffchar::FiniteField::of_order(pair.params.big_q)
        .expect("coefficient field within cap");
    let mut solver = Vec::new();
    type LastSolve = (ConstraintSystem<f64>, Option<Vec<C<f64>>>);
    let mut last: Option<LastSolve> = None;
    for r in 1..=radius {
        let tree = TruncatedTree::build_ramified(pair.params.big_q as usize + 1, r)?;
        let sys = assemble::<f64>(pair, &field, &tree)?;
        let (nullity, witness) = solve(&sys);
        solver.push(SolverOutcome { radius: r, nullity });
        if r == radius {
            last = Some((sys, witness));
        }
    }
    let final_nullity = solver.last().map_or(0, |s| s.nullity);
    let (verdict, reason) = if final_nullity == 0 {
        (
            Verdict::NotDistinguished,
            if pair.f_even() {
                "even orbit length: intertwiner relation kills the candidate".into()
            } else {
                "no invariant family survives the constraints".into()
            },
        )
    } else {
        (
            Verdict::Candidate,
            "necessary conditions met (sufficiency not established)".into(),
        )
    };
    let (sys, witness) = last.expect("radius >= 1");
    let propagation_residual = witness
        .as_ref()
        .filter(|_| final_nullity == 1 && !pair.f_even())
        .map(|w| check_propagation_formula(pair, &field, &sys.layout, w));
    let mut row_counts: Vec<(String, usize)> = Vec::new();
    for row in &sys.rows {
        let key = row.tag.kind();
        match row_counts.iter_mut().find(|(k, _)| *k == key) {
            Some((_, n)) => *n += 1,
            None => row_counts.push((key, 1)),
        }
    }
    Ok(DistinctionReport {
        case: "ramified".into(),
        f: pair.f,
        big_q: pair.params.big_q,
        chi0_exponent: pair.chi0_bar.exponent,
        chi0_order_on_k: pair.chi0_order_on_k(),
        central_residue_trivial: residue_ok,
        central_unif_trivial: unif_ok,
        solver,
        verdict,
        verdict_reason: reason,
        witness: witness
            .as_ref()
            .map(|w| w.iter().map(|c| (c.re, c.im)).collect()),
        propagation_residual,
        row_counts,
        timing_ms: start.elapsed().as_millis(),
    })
}
