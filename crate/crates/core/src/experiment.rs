//! Repeated-trial drivers for the attacks, shared by the CLI and the
//! acceptance suite.

use serde::Serialize;

use crate::attack::{recover_k1, recover_padded_scalar, RecoveryKind};
use crate::composed::{attack_shared_vec_mat, shared_vec_mat};
use crate::error::{Error, Result};
use crate::field::{FieldSampler, Modulus};
use crate::linalg::{FieldMatrix, FieldVector};
use crate::protocol::{run_padded_session, run_session};
use crate::trials::run_trials;

/// Probability that a uniform k×k matrix over F_q is invertible:
/// `Π_{i=1..k} (1 − q^{−i})`.
pub fn nonsingular_probability(q: Modulus, k: usize) -> f64 {
    let q = q.get() as f64;
    (1..=k as i32).map(|i| 1.0 - q.powi(-i)).product()
}

fn check_trials(trials: u64) -> Result<()> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ScalarAttackTally {
    pub trials: u64,
    /// Recovered value equal to P1's input.
    pub recovered: u64,
    /// `y₀ = 0`: nothing to solve.
    pub undetermined: u64,
    /// Recovered value different from P1's input. Always zero for honest runs.
    pub wrong: u64,
}

/// `trials` independent `k = 1` sessions with uniform inputs, each attacked
/// with [`recover_k1`].
pub fn scalar_attack(
    q: Modulus,
    trials: u64,
    seed: u64,
    threads: usize,
) -> Result<ScalarAttackTally> {
    check_trials(trials)?;
    let results = run_trials(trials, seed, threads, |_, rng| {
        let x = FieldVector::random(1, q, rng);
        let y = FieldVector::random(1, q, rng);
        let view = run_session(&x, &y, rng)
            .expect("honest")
            .p2_view(&y)
            .expect("completed");
        recover_k1(&view).expect("k = 1").map(|got| got == x[0])
    });
    Ok(tally_scalar(trials, &results))
}

/// As [`scalar_attack`], but each session is a length-1 computation run on
/// the length-`k` protocol through zero padding.
pub fn padded_scalar_attack(
    q: Modulus,
    k: usize,
    trials: u64,
    seed: u64,
    threads: usize,
) -> Result<ScalarAttackTally> {
    check_trials(trials)?;
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let results = run_trials(trials, seed, threads, |_, rng| {
        let x = FieldVector::random(1, q, rng);
        let y = FieldVector::random(1, q, rng);
        let t = run_padded_session(&x, &y, k, rng).expect("honest");
        let view = t.p2_view(&y.padded(k).expect("k >= 1")).expect("completed");
        recover_padded_scalar(&view).map(|got| got == x[0])
    });
    Ok(tally_scalar(trials, &results))
}

fn tally_scalar(trials: u64, results: &[Option<bool>]) -> ScalarAttackTally {
    let count = |want: Option<bool>| results.iter().filter(|&&r| r == want).count() as u64;
    ScalarAttackTally {
        trials,
        recovered: count(Some(true)),
        undetermined: count(None),
        wrong: count(Some(false)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct VecMatAttackTally {
    pub trials: u64,
    pub unique: u64,
    pub partial: u64,
    pub none: u64,
    /// Unique recoveries equal to P1's input.
    pub unique_correct: u64,
    /// Partial recoveries whose solution set contains P1's input.
    pub partial_contains_truth: u64,
    /// Trials where `unique ⇔ Y₀ nonsingular` held.
    pub biconditional_holds: u64,
    /// Trials where `w̄1 + w̄2 = x̄ × Y`.
    pub shares_correct: u64,
}

impl VecMatAttackTally {
    pub fn unique_rate(&self) -> f64 {
        self.unique as f64 / self.trials as f64
    }
}

/// `trials` square compositions: uniform `x̄` (length k) and `Y` (k×k),
/// shared multiplication, then [`attack_shared_vec_mat`].
pub fn vecmat_attack(
    q: Modulus,
    k: usize,
    trials: u64,
    seed: u64,
    threads: usize,
) -> Result<VecMatAttackTally> {
    check_trials(trials)?;
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let results = run_trials(trials, seed, threads, |_, rng| vecmat_trial(q, k, rng));
    let mut tally = VecMatAttackTally {
        trials,
        unique: 0,
        partial: 0,
        none: 0,
        unique_correct: 0,
        partial_contains_truth: 0,
        biconditional_holds: 0,
        shares_correct: 0,
    };
    for r in results {
        match r.kind {
            RecoveryKind::Unique => tally.unique += 1,
            RecoveryKind::Partial => tally.partial += 1,
            RecoveryKind::None => tally.none += 1,
        }
        tally.unique_correct += u64::from(r.kind == RecoveryKind::Unique && r.truth_admitted);
        tally.partial_contains_truth +=
            u64::from(r.kind == RecoveryKind::Partial && r.truth_admitted);
        tally.biconditional_holds += u64::from((r.kind == RecoveryKind::Unique) == r.nonsingular);
        tally.shares_correct += u64::from(r.shares_correct);
    }
    Ok(tally)
}

struct VecMatTrial {
    kind: RecoveryKind,
    truth_admitted: bool,
    nonsingular: bool,
    shares_correct: bool,
}

fn vecmat_trial<S: FieldSampler + ?Sized>(q: Modulus, k: usize, rng: &mut S) -> VecMatTrial {
    let x = FieldVector::random(k, q, rng);
    let y = FieldMatrix::random(k, k, q, rng);
    let out = shared_vec_mat(&x, &y, rng).expect("shapes agree");
    let shares = out.shares().expect("honest compositions complete");
    let result = attack_shared_vec_mat(shares).expect("k views");
    VecMatTrial {
        kind: result.kind,
        truth_admitted: result.admits(&x),
        nonsingular: result.system.y0.is_nonsingular().expect("square"),
        shares_correct: shares.reconstruct() == x.mul_matrix(&y).expect("shapes agree"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: u64) -> Modulus {
        Modulus::new(v).unwrap()
    }

    #[test]
    fn closed_form_probabilities() {
        assert!((nonsingular_probability(q(2), 2) - 0.375).abs() < 1e-15);
        assert!((nonsingular_probability(q(2), 1) - 0.5).abs() < 1e-15);
        assert!((nonsingular_probability(q(101), 1) - 100.0 / 101.0).abs() < 1e-15);
        assert!(nonsingular_probability(q(101), 8) > 0.99);
    }

    #[test]
    fn small_runs_are_sound() {
        let s = scalar_attack(q(11), 300, 1, 1).unwrap();
        assert_eq!(s.wrong, 0);
        assert_eq!(s.recovered + s.undetermined, 300);

        let p = padded_scalar_attack(q(11), 4, 300, 1, 2).unwrap();
        assert_eq!(p.wrong, 0);

        let v = vecmat_attack(q(3), 3, 200, 1, 2).unwrap();
        assert_eq!(v.none, 0);
        assert_eq!(v.unique_correct, v.unique);
        assert_eq!(v.partial_contains_truth, v.partial);
        assert_eq!(v.biconditional_holds, 200);
        assert_eq!(v.shares_correct, 200);
        assert_eq!(v, vecmat_attack(q(3), 3, 200, 1, 1).unwrap());
    }

    #[test]
    fn zero_trials_rejected() {
        assert!(scalar_attack(q(11), 0, 1, 1).is_err());
        assert!(vecmat_attack(q(11), 2, 0, 1, 1).is_err());
        assert!(vecmat_attack(q(11), 0, 5, 1, 1).is_err());
    }
}
