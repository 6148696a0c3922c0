//! A corrupted P2 against the preprocessing-model protocol.
//!
//! From `x̄₁ = x̄ + x̄₀` and its own `ȳ₀`, `s₀ = ⟨x̄₀·ȳ₀⟩`, P2 gets one linear
//! equation on P1's input per session:
//!
//! ```text
//! ⟨x̄·ȳ₀⟩ = ⟨x̄₁·ȳ₀⟩ − s₀
//! ```
//!
//! With `k = 1` that equation pins `x` whenever `y₀ ≠ 0`. With `k` sessions
//! on the same `x̄` the equations stack into `x̄ × Y₀ = q̄₀`, where column `i` of
//! `Y₀` is the `i`-th session's `ȳ₀`; if `Y₀` is invertible, `x̄` is recovered
//! outright. The trusted-party functionality gives P2 only `w2`, which is
//! uniform whatever `x̄` is, so no such equation exists there. The
//! distinguisher below tests exactly that equation.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSampler, Modulus};
use crate::ideal::{ideal_dip, IdealOutcome};
use crate::linalg::{solve, FieldMatrix, FieldVector, SolutionKind, SolutionSet};
use crate::protocol::{run_session, P2View};
use crate::trials::run_trials;

/// `⟨x̄·coeffs⟩ = rhs`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinearEquation {
    pub coeffs: FieldVector,
    pub rhs: FieldElement,
}

impl LinearEquation {
    pub fn is_satisfied_by(&self, x: &FieldVector) -> bool {
        x.dot(&self.coeffs).is_ok_and(|lhs| lhs == self.rhs)
    }

    /// `0 = 0`: carries no information about `x̄`.
    pub fn is_vacuous(&self) -> bool {
        self.coeffs.is_zero()
    }
}

/// The equation on P1's input leaked by one session.
pub fn extract_equation(view: &P2View) -> LinearEquation {
    let rhs = view.x1.dot(&view.y0).expect("view vectors share a shape") - view.s0;
    LinearEquation {
        coeffs: view.y0.clone(),
        rhs,
    }
}

/// P1's scalar input from a `k = 1` view; `None` when `y₀ = 0`.
pub fn recover_k1(view: &P2View) -> Result<Option<FieldElement>> {
    if view.k() != 1 {
        return Err(Error::InvalidArgument(format!(
            "scalar recovery needs k = 1, got k = {}",
            view.k()
        )));
    }
    let eq = extract_equation(view);
    let y0 = eq.coeffs[0];
    if y0.is_zero() {
        return Ok(None);
    }
    Ok(Some(eq.rhs * y0.inv()?))
}

/// P1's scalar from a session run on inputs zero-padded from length 1.
///
/// The padding coordinates of `x̄` are known to be zero, so the leaked
/// equation collapses to `x·y₀[0] = rhs`. `None` when `y₀[0] = 0`.
pub fn recover_padded_scalar(view: &P2View) -> Option<FieldElement> {
    let eq = extract_equation(view);
    let lead = eq.coeffs[0];
    (!lead.is_zero()).then(|| eq.rhs * lead.inv().expect("nonzero"))
}

/// Stacks the leaked equations: `Y₀` (k×m) has column `i` = `ȳ₀ⁱ`, and
/// `q̄₀[i] = ⟨x̄₁ⁱ·ȳ₀ⁱ⟩ − s₀ⁱ`, so that `x̄ × Y₀ = q̄₀`.
pub fn build_system(views: &[P2View]) -> Result<(FieldMatrix, FieldVector)> {
    let first = views
        .first()
        .ok_or_else(|| Error::InvalidArgument("no views to attack".into()))?;
    let (k, q) = (first.k(), first.modulus());
    if let Some(bad) = views.iter().find(|v| v.k() != k || v.modulus() != q) {
        return Err(Error::DimensionMismatch(format!(
            "views mix (k = {k}, q = {q}) with (k = {}, q = {})",
            bad.k(),
            bad.modulus()
        )));
    }
    let equations: Vec<LinearEquation> = views.iter().map(extract_equation).collect();
    let columns: Vec<FieldVector> = equations.iter().map(|e| e.coeffs.clone()).collect();
    let rhs = FieldVector::new(equations.iter().map(|e| e.rhs).collect(), q)?;
    Ok((FieldMatrix::from_columns(&columns)?, rhs))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RecoveryKind {
    Unique,
    Partial,
    None,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LeakedSystem {
    pub y0: FieldMatrix,
    pub q0: FieldVector,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RecoveryResult {
    pub kind: RecoveryKind,
    pub recovered: Option<FieldVector>,
    pub solution_set: Option<SolutionSet>,
    pub system: LeakedSystem,
}

impl RecoveryResult {
    /// Whether `x` is consistent with everything P2 learned.
    pub fn admits(&self, x: &FieldVector) -> bool {
        match self.kind {
            RecoveryKind::Unique => self.recovered.as_ref() == Some(x),
            RecoveryKind::Partial => x
                .mul_matrix(&self.system.y0)
                .is_ok_and(|v| v == self.system.q0),
            RecoveryKind::None => false,
        }
    }
}

/// Solves the stacked system `Y₀ᵀ · x̄ᵀ = q̄₀ᵀ`.
///
/// Vacuous equations from all-zero masks are kept; they only lower the rank.
pub fn recover_input(views: &[P2View]) -> Result<RecoveryResult> {
    let (y0, q0) = build_system(views)?;
    let solutions = solve(&y0.transpose(), &q0)?;
    let system = LeakedSystem { y0, q0 };
    Ok(match solutions.kind {
        SolutionKind::Unique => RecoveryResult {
            kind: RecoveryKind::Unique,
            recovered: solutions.particular.clone(),
            solution_set: Some(solutions),
            system,
        },
        SolutionKind::Affine => RecoveryResult {
            kind: RecoveryKind::Partial,
            recovered: None,
            solution_set: Some(solutions),
            system,
        },
        SolutionKind::Inconsistent => RecoveryResult {
            kind: RecoveryKind::None,
            recovered: None,
            solution_set: Some(solutions),
            system,
        },
    })
}

/// A P2 view fabricated from `(ȳ, w2)` alone.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct SimulatedP2View(pub P2View);

/// The candidate simulator: fresh uniform `ȳ₀`, `x̄₁`, `s₀`, with `r₁` chosen
/// so the view reproduces `w2`. Coins are drawn in that order.
pub fn straw_simulate<S: FieldSampler + ?Sized>(
    y: &FieldVector,
    w2: FieldElement,
    rng: &mut S,
) -> SimulatedP2View {
    let (k, q) = (y.len(), y.modulus());
    let y0 = FieldVector::random(k, q, rng);
    let x1 = FieldVector::random(k, q, rng);
    let s0 = rng.sample(q);
    let r1 = w2 - x1.dot(&y0).expect("same shape") + s0;
    SimulatedP2View(P2View {
        y: y.clone(),
        y0,
        s0,
        x1,
        r1,
        w2,
    })
}

/// Accepts iff the leakage equation holds for the true `x̄`.
pub fn distinguish(view: &P2View, x: &FieldVector) -> bool {
    extract_equation(view).is_satisfied_by(x)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdvantageReport {
    pub q: Modulus,
    pub k: usize,
    pub trials: u64,
    pub seed: u64,
    pub real_accepts: u64,
    pub ideal_accepts: u64,
    pub real_accept_rate: f64,
    pub ideal_accept_rate: f64,
    pub advantage: f64,
}

/// Per trial: uniform `x̄, ȳ`; one real session and one trusted-party run
/// followed by [`straw_simulate`]; [`distinguish`] on both views.
pub fn run_distinguisher_experiment(
    q: Modulus,
    k: usize,
    trials: u64,
    seed: u64,
    threads: usize,
) -> Result<AdvantageReport> {
    if trials == 0 || k == 0 {
        return Err(Error::InvalidArgument(
            "trials and k must be at least 1".into(),
        ));
    }
    let outcomes = run_trials(trials, seed, threads, |_, rng| {
        let x = FieldVector::random(k, q, rng);
        let y = FieldVector::random(k, q, rng);
        let real = run_session(&x, &y, rng).expect("honest inputs");
        let real_view = real.p2_view(&y).expect("honest sessions complete");
        let IdealOutcome::Shares { w2, .. } = ideal_dip(&(&x).into(), &(&y).into(), k, q, rng)
        else {
            unreachable!("valid inputs never abort");
        };
        let simulated = straw_simulate(&y, w2, rng);
        (distinguish(&real_view, &x), distinguish(&simulated.0, &x))
    });
    let real_accepts = outcomes.iter().filter(|o| o.0).count() as u64;
    let ideal_accepts = outcomes.iter().filter(|o| o.1).count() as u64;
    let real_accept_rate = real_accepts as f64 / trials as f64;
    let ideal_accept_rate = ideal_accepts as f64 / trials as f64;
    Ok(AdvantageReport {
        q,
        k,
        trials,
        seed,
        real_accepts,
        ideal_accepts,
        real_accept_rate,
        ideal_accept_rate,
        advantage: real_accept_rate - ideal_accept_rate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{DipRng, ScriptedSource};

    fn q(v: u64) -> Modulus {
        Modulus::new(v).unwrap()
    }

    fn view_of(x: &[i64], y: &[i64], modulus: u64, coins: &mut impl FieldSampler) -> P2View {
        let (x, y) = (
            FieldVector::from_values(x, q(modulus)),
            FieldVector::from_values(y, q(modulus)),
        );
        run_session(&x, &y, coins).unwrap().p2_view(&y).unwrap()
    }

    #[test]
    fn worked_equation() {
        let view = view_of(
            &[1, 2],
            &[3, 4],
            7,
            &mut ScriptedSource::new(vec![5, 6, 2, 3, 4]),
        );
        let eq = extract_equation(&view);
        assert_eq!(eq.coeffs.values(), vec![2, 3]);
        assert_eq!(eq.rhs.value(), 1);
        assert!(eq.is_satisfied_by(&FieldVector::from_values(&[1, 2], q(7))));
    }

    #[test]
    fn zero_mask_gives_vacuous_equation() {
        let view = view_of(
            &[1, 2],
            &[3, 4],
            7,
            &mut ScriptedSource::new(vec![5, 6, 0, 0, 4]),
        );
        let eq = extract_equation(&view);
        assert!(eq.is_vacuous());
        assert!(eq.rhs.is_zero());
    }

    #[test]
    fn scalar_recovery_example() {
        // x = 3, x₀ = 2, y₀ = 4 (so s₀ = 1, x₁ = 5)
        let view = view_of(&[3], &[6], 7, &mut ScriptedSource::new(vec![2, 4, 0]));
        assert_eq!(view.s0.value(), 1);
        assert_eq!(view.x1.values(), vec![5]);
        assert_eq!(recover_k1(&view).unwrap(), Some(q(7).reduce(3)));

        let blind = view_of(&[3], &[6], 7, &mut ScriptedSource::new(vec![2, 0, 0]));
        assert_eq!(recover_k1(&blind).unwrap(), None);

        let wide = view_of(&[3, 1], &[6, 1], 7, &mut DipRng::from_seed(1));
        assert!(recover_k1(&wide).is_err());
    }

    #[test]
    fn unit_masks_reveal_input_directly() {
        // session i: x₀ arbitrary, ȳ₀ = e_i, r arbitrary
        let mut coins = ScriptedSource::new(vec![3, 5, 1, 0, 2, 6, 4, 0, 1, 1]);
        let views = [
            view_of(&[4, 6], &[1, 1], 7, &mut coins),
            view_of(&[4, 6], &[2, 3], 7, &mut coins),
        ];
        let (y0, q0) = build_system(&views).unwrap();
        assert_eq!(y0, FieldMatrix::identity(2, q(7)));
        assert_eq!(q0.values(), vec![4, 6]);
        let result = recover_input(&views).unwrap();
        assert_eq!(result.kind, RecoveryKind::Unique);
        assert_eq!(result.recovered.unwrap().values(), vec![4, 6]);
    }

    #[test]
    fn single_k1_view_matches_scalar_recovery() {
        let mut rng = DipRng::from_seed(12);
        for _ in 0..200 {
            let view = view_of(&[rng.sample(q(11)).value() as i64], &[5], 11, &mut rng);
            let (y0, q0) = build_system(std::slice::from_ref(&view)).unwrap();
            assert_eq!(y0.get(0, 0), view.y0[0]);
            let r = recover_input(std::slice::from_ref(&view)).unwrap();
            assert_eq!(
                r.recovered.as_ref().map(|v| v[0]),
                recover_k1(&view).unwrap()
            );
            assert_eq!(q0[0], extract_equation(&view).rhs);
        }
    }

    #[test]
    fn duplicate_views_are_rank_deficient() {
        let view = view_of(&[1, 2, 3], &[1, 1, 1], 101, &mut DipRng::from_seed(9));
        let views = vec![view.clone(), view.clone(), view];
        let (y0, _) = build_system(&views).unwrap();
        assert!(y0.rank() <= 1);
        let r = recover_input(&views).unwrap();
        assert_eq!(r.kind, RecoveryKind::Partial);
        assert!(r.admits(&FieldVector::from_values(&[1, 2, 3], q(101))));
    }

    #[test]
    fn all_zero_masks_leave_everything_open() {
        let mut coins = ScriptedSource::new(vec![1, 2, 0, 0, 3, 4, 5, 0, 0, 6]);
        let views = [
            view_of(&[1, 1], &[2, 2], 7, &mut coins),
            view_of(&[1, 1], &[2, 2], 7, &mut coins),
        ];
        let r = recover_input(&views).unwrap();
        assert_eq!(r.kind, RecoveryKind::Partial);
        let set = r.solution_set.unwrap();
        assert_eq!(set.rank, 0);
        assert_eq!(set.count(q(7)), Some(49));
    }

    #[test]
    fn mixed_views_are_rejected() {
        let a = view_of(&[1, 2], &[1, 1], 7, &mut DipRng::from_seed(1));
        let b = view_of(&[1], &[1], 7, &mut DipRng::from_seed(1));
        assert!(build_system(&[a.clone(), b]).is_err());
        let c = view_of(&[1, 2], &[1, 1], 11, &mut DipRng::from_seed(1));
        assert!(build_system(&[a, c]).is_err());
        assert!(build_system(&[]).is_err());
    }

    #[test]
    fn simulated_views_are_output_consistent() {
        let mut rng = DipRng::from_seed(31);
        let y = FieldVector::from_values(&[3, 9, 27], q(101));
        for w in 0..101 {
            let sim = straw_simulate(&y, q(101).reduce(w), &mut rng).0;
            assert_eq!(sim.w2, sim.x1.dot(&sim.y0).unwrap() + sim.r1 - sim.s0);
            assert_eq!(sim.y, y);
        }
    }

    #[test]
    fn real_views_always_accepted() {
        let mut rng = DipRng::from_seed(2);
        for _ in 0..500 {
            let x = FieldVector::random(4, q(101), &mut rng);
            let y = FieldVector::random(4, q(101), &mut rng);
            let view = run_session(&x, &y, &mut rng).unwrap().p2_view(&y).unwrap();
            assert!(distinguish(&view, &x));
        }
    }

    #[test]
    fn experiment_is_deterministic_and_thread_independent() {
        let a = run_distinguisher_experiment(q(7), 3, 2_000, 5, 1).unwrap();
        let b = run_distinguisher_experiment(q(7), 3, 2_000, 5, 3).unwrap();
        assert_eq!(a, b);
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
        assert_eq!(a.real_accept_rate, 1.0);
        assert_eq!(a.advantage, a.real_accept_rate - a.ideal_accept_rate);
        assert!(run_distinguisher_experiment(q(7), 3, 0, 5, 1).is_err());
    }
}
