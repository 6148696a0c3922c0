use diplab::attack::run_distinguisher_experiment;
use diplab::experiment::{nonsingular_probability, scalar_attack, vecmat_attack};
use diplab::protocol::{run_session, Transcript};
use diplab::stats::{rate_sigma, RateCheck};
use diplab::{DipRng, FieldElement, FieldVector, Modulus};
use serde::Serialize;

/// Echo of everything that determines a report's content.
#[derive(Debug, Clone, Serialize)]
pub struct ConfigEcho {
    pub command: &'static str,
    pub q: Modulus,
    pub k: usize,
    pub trials: u64,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<&'static str>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Claim {
    pub name: &'static str,
    #[serde(flatten)]
    pub check: RateCheck,
}

impl Claim {
    fn exact(name: &'static str, observed: f64, expected: f64) -> Self {
        Claim {
            name,
            check: RateCheck::new(observed, expected, 0.0, 3.0),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report<R: Serialize> {
    pub config: ConfigEcho,
    pub result: R,
    pub claims: Vec<Claim>,
    pub pass: bool,
}

impl<R: Serialize> Report<R> {
    fn new(config: ConfigEcho, result: R, claims: Vec<Claim>) -> Self {
        let pass = claims.iter().all(|c| c.check.pass);
        Report {
            config,
            result,
            claims,
            pass,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunResult {
    pub x: FieldVector,
    pub y: FieldVector,
    pub inner_product: FieldElement,
    pub transcript: Transcript,
}

pub fn run(q: Modulus, k: usize, seed: u64) -> Report<RunResult> {
    let mut rng = DipRng::from_seed(seed);
    let x = FieldVector::random(k, q, &mut rng);
    let y = FieldVector::random(k, q, &mut rng);
    let transcript = run_session(&x, &y, &mut rng).expect("inputs share a shape");
    let inner_product = x.dot(&y).expect("inputs share a shape");
    let correct = transcript.reconstructed() == Some(inner_product);
    let claims = vec![Claim::exact(
        "outcome1 + outcome2 = <x, y>",
        f64::from(u8::from(correct)),
        1.0,
    )];
    let config = ConfigEcho {
        command: "run",
        q,
        k,
        trials: 1,
        seed,
        mode: None,
    };
    Report::new(
        config,
        RunResult {
            x,
            y,
            inner_product,
            transcript,
        },
        claims,
    )
}

pub fn attack_scalar(
    q: Modulus,
    trials: u64,
    seed: u64,
    threads: usize,
) -> Report<serde_json::Value> {
    let tally = scalar_attack(q, trials, seed, threads).expect("validated config");
    let expected = 1.0 - 1.0 / q.get() as f64;
    let claims = vec![
        Claim {
            name: "success_rate ~ 1 - 1/q",
            check: RateCheck::binomial(tally.recovered, trials, expected),
        },
        Claim::exact("wrong recoveries", tally.wrong as f64, 0.0),
    ];
    let result = serde_json::json!({
        "tally": tally,
        "success_rate": tally.recovered as f64 / trials as f64,
    });
    let config = ConfigEcho {
        command: "attack",
        q,
        k: 1,
        trials,
        seed,
        mode: Some("scalar"),
    };
    Report::new(config, result, claims)
}

pub fn attack_vecmat(
    q: Modulus,
    k: usize,
    trials: u64,
    seed: u64,
    threads: usize,
) -> Report<serde_json::Value> {
    let tally = vecmat_attack(q, k, trials, seed, threads).expect("validated config");
    let expected = nonsingular_probability(q, k);
    let claims = vec![
        Claim {
            name: "unique-recovery rate ~ P[Y0 nonsingular]",
            check: RateCheck::binomial(tally.unique, trials, expected),
        },
        Claim::exact(
            "unique recoveries equal to the true input",
            tally.unique_correct as f64,
            tally.unique as f64,
        ),
        Claim::exact(
            "partial solution sets containing the true input",
            tally.partial_contains_truth as f64,
            tally.partial as f64,
        ),
        Claim::exact(
            "trials with unique <=> nonsingular",
            tally.biconditional_holds as f64,
            trials as f64,
        ),
        Claim::exact(
            "compositions with correct shares",
            tally.shares_correct as f64,
            trials as f64,
        ),
    ];
    let result = serde_json::json!({
        "tally": tally,
        "success_rate": tally.unique_rate(),
    });
    let config = ConfigEcho {
        command: "attack",
        q,
        k,
        trials,
        seed,
        mode: Some("vecmat"),
    };
    Report::new(config, result, claims)
}

pub fn distinguish(
    q: Modulus,
    k: usize,
    trials: u64,
    seed: u64,
    threads: usize,
) -> Report<serde_json::Value> {
    let r = run_distinguisher_experiment(q, k, trials, seed, threads).expect("validated config");
    let p = 1.0 / q.get() as f64;
    let sigma = rate_sigma(p, trials);
    let claims = vec![
        Claim::exact("real-view accept rate = 1", r.real_accept_rate, 1.0),
        Claim {
            name: "simulated-view accept rate ~ 1/q",
            check: RateCheck::binomial(r.ideal_accepts, trials, p),
        },
        Claim {
            name: "advantage ~ 1 - 1/q",
            check: RateCheck::new(r.advantage, 1.0 - p, sigma, 3.0),
        },
    ];
    let config = ConfigEcho {
        command: "distinguish",
        q,
        k,
        trials,
        seed,
        mode: None,
    };
    Report::new(
        config,
        serde_json::to_value(&r).expect("serializable"),
        claims,
    )
}
