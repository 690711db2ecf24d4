//! Acceptance suite. Each test prints one PASS/FAIL line, then asserts.
//!
//! Run with `cargo test -p redsm-cli --test acceptance -- --nocapture`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::path::Path;

use redsm_cli::{run_scenario, CsvRow, Report, Scenario, ScenarioName};
use redsm_core::coupling::{decomposed_interaction, decomposition_factors, interaction, InteractionSpec, TensorLayout};
use redsm_core::montecarlo::simulate;
use redsm_core::montecarlo::TrialSpec;
use redsm_core::qmath::{hermitian_eig, random_mixed, random_pure, CMatrix, CVector, Cplx};
use redsm_core::rebit::{embed_pure, real_form_gate};
use redsm_core::tomography::reference_qubit_state;
use redsm_core::{
    run_batches, AggregateResult, BatchMode, BudgetMode, Prng, Protocol, ProtocolConfig, PureMode, SampleBudget,
    Sampling, StateSource, TrueState,
};

fn report(id: &str, ok: bool, detail: &str) {
    println!("criterion {id}: {} {detail}", if ok { "PASS" } else { "FAIL" });
}

fn run(mut s: Scenario, dir: &Path) -> Report {
    s.out = dir.join(format!("{}.csv", s.name));
    run_scenario(&s).expect("scenario runs")
}

fn scenario(name: ScenarioName) -> Scenario {
    Scenario::defaults(name)
}

fn row(rep: &Report, protocol: Protocol, pred: impl Fn(&CsvRow) -> bool) -> (&CsvRow, &AggregateResult) {
    let i = rep
        .rows
        .iter()
        .position(|r| r.protocol == protocol && pred(r))
        .unwrap_or_else(|| panic!("no row for {protocol}"));
    (&rep.rows[i], &rep.results[i])
}

fn combined_se(a: &AggregateResult, b: &AggregateResult) -> f64 {
    (a.std_error().powi(2) + b.std_error().powi(2)).sqrt()
}

#[test]
fn criterion_01_exactness() {
    let spec = TrialSpec {
        copies: 1_000_000,
        budget_mode: BudgetMode::PaperP0,
        sampling: Sampling::Exact,
    };
    let mut prng = Prng::new(101);
    let mut worst: f64 = 0.0;
    let mut check = |protocol: Protocol, state: TrueState, prng: &mut Prng| {
        let mut stream = prng.substream(0);
        let out = simulate(protocol, &state, FRAC_PI_2, &spec, &mut stream).expect("exact reconstruction");
        worst = worst.max(out.trace_dist);
    };
    for d in [2, 3] {
        for _ in 0..100 {
            check(
                Protocol::RedsmPure,
                TrueState::Pure(random_pure(d, PureMode::Nonneg, &mut prng)),
                &mut prng,
            );
            check(
                Protocol::DsmPure,
                TrueState::Pure(random_pure(d, PureMode::Haar, &mut prng)),
                &mut prng,
            );
            let rho = random_mixed(d, &mut prng);
            for p in [Protocol::RedsmSsb, Protocol::RedsmBbb, Protocol::DsmMixed] {
                check(p, TrueState::Mixed(rho.clone()), &mut prng);
            }
        }
    }
    for d in [2, 3, 5] {
        for _ in 0..100 {
            check(
                Protocol::MubQst,
                TrueState::Pure(random_pure(d, PureMode::Haar, &mut prng)),
                &mut prng,
            );
            check(
                Protocol::MubQst,
                TrueState::Mixed(random_mixed(d, &mut prng)),
                &mut prng,
            );
        }
    }
    let ok = worst < 1e-10;
    report("1", ok, &format!("worst trace distance {worst:.3e} (limit 1e-10)"));
    assert!(ok);
}

#[test]
fn criterion_02_reference_state() {
    let dir = tempfile::tempdir().unwrap();
    let rep = run(scenario(ScenarioName::Fig5), dir.path());
    let trial = rep.first_trial().expect("one trial");
    let err = trial.state.max_abs_diff(&reference_qubit_state());
    let eig = hermitian_eig(&trial.state).unwrap().eigenvalues;
    let ok = err < 5e-3 && eig.iter().all(|&e| e > 0.0);
    report(
        "2",
        ok,
        &format!(
            "max elementwise error {err:.3e}, eigenvalues {:.5} {:.5}",
            eig[0], eig[1]
        ),
    );
    assert!(ok);
}

#[test]
fn criterion_03_pure_ordering() {
    let dir = tempfile::tempdir().unwrap();
    let mut s = scenario(ScenarioName::Fig2a);
    s.nc = vec![100_000, 1_000_000, 10_000_000];
    let rep = run(s, dir.path());
    let mut ok = true;
    let mut detail = Vec::new();
    for nc in [100_000u64, 1_000_000, 10_000_000] {
        let at = |r: &CsvRow| r.point.nc == nc;
        let (_, redsm) = row(&rep, Protocol::RedsmPure, at);
        let (_, dsm) = row(&rep, Protocol::DsmPure, at);
        let (_, mub) = row(&rep, Protocol::MubQst, at);
        let here =
            redsm.mean < dsm.mean && redsm.mean < mub.mean && (dsm.mean - mub.mean).abs() < 2.0 * combined_se(dsm, mub);
        ok &= here;
        detail.push(format!(
            "N_c={nc:.0e}: redsm {:.3e} dsm {:.3e} mub {:.3e}",
            redsm.mean, dsm.mean, mub.mean
        ));
    }
    report("3", ok, &detail.join("; "));
    assert!(ok);
}

#[test]
fn criterion_04_dimension_growth() {
    let dir = tempfile::tempdir().unwrap();
    let mut s = scenario(ScenarioName::Fig2b);
    s.d = vec![2, 3, 5];
    let rep = run(s, dir.path());
    let mut ok = true;
    let mut detail = Vec::new();
    for p in [Protocol::RedsmPure, Protocol::DsmPure, Protocol::MubQst] {
        let means: Vec<f64> = [2, 3, 5]
            .iter()
            .map(|&d| row(&rep, p, |r| r.point.d == d).1.mean)
            .collect();
        ok &= means.windows(2).all(|w| w[0] < w[1]);
        detail.push(format!("{p} {:.3e} {:.3e} {:.3e}", means[0], means[1], means[2]));
    }
    report("4", ok, &detail.join("; "));
    assert!(ok);
}

#[test]
fn criterion_05a_mixed_ordering() {
    let dir = tempfile::tempdir().unwrap();
    let mut s = scenario(ScenarioName::Fig3a);
    s.nc = vec![1_000_000];
    let rep = run(s, dir.path());
    let all = |_: &CsvRow| true;
    let variants = [Protocol::RedsmSsb, Protocol::RedsmBbb, Protocol::DsmMixed];
    let res: Vec<&AggregateResult> = variants.iter().map(|&p| row(&rep, p, all).1).collect();
    let mub = row(&rep, Protocol::MubQst, all).1;
    let mut ok = res.iter().all(|r| r.mean > mub.mean);
    for i in 0..3 {
        for j in i + 1..3 {
            ok &= (res[i].mean - res[j].mean).abs() < 2.0 * combined_se(res[i], res[j]);
        }
    }
    report(
        "5a",
        ok,
        &format!(
            "ssb {:.3e} bbb {:.3e} dsm {:.3e} mub {:.3e}",
            res[0].mean, res[1].mean, res[2].mean, mub.mean
        ),
    );
    assert!(ok);
}

#[test]
fn criterion_05b_theta_trend() {
    let dir = tempfile::tempdir().unwrap();
    let rep = run(scenario(ScenarioName::Fig3b), dir.path());
    let thetas = scenario(ScenarioName::Fig3b).theta;
    let mut ok = true;
    let mut detail = Vec::new();
    for p in [Protocol::RedsmSsb, Protocol::RedsmBbb, Protocol::DsmMixed] {
        let res: Vec<&AggregateResult> = thetas.iter().map(|&t| row(&rep, p, |r| r.point.theta == t).1).collect();
        let violations = res
            .windows(2)
            .filter(|w| w[1].mean - w[0].mean > combined_se(w[0], w[1]))
            .count();
        ok &= violations <= 1;
        detail.push(format!("{p} {violations} violation(s)"));
    }
    let mub: Vec<f64> = thetas
        .iter()
        .map(|&t| row(&rep, Protocol::MubQst, |r| r.point.theta == t).1.mean)
        .collect();
    let constant = mub.iter().all(|&m| m == mub[0]);
    ok &= constant;
    detail.push(format!("mub constant {constant}"));
    report("5b", ok, &detail.join("; "));
    assert!(ok);
}

#[test]
fn criterion_06_nearly_pure() {
    let dir = tempfile::tempdir().unwrap();
    let mut s = scenario(ScenarioName::Fig4b);
    s.protocols = vec![Protocol::RedsmSsb, Protocol::RedsmBbb, Protocol::DsmMixed];
    let nus = s.nu.clone();
    let rep = run(s, dir.path());
    let mut ok = true;
    let mut detail = Vec::new();
    for &nu in &nus {
        let at = |r: &CsvRow| r.point.nu == nu;
        let ssb = row(&rep, Protocol::RedsmSsb, at).1.mean;
        let bbb = row(&rep, Protocol::RedsmBbb, at).1.mean;
        let dsm = row(&rep, Protocol::DsmMixed, at).1.mean;
        let here = ssb <= bbb && ssb <= dsm;
        ok &= here;
        if !here || (nu - 0.10).abs() < 1e-12 {
            detail.push(format!("nu={nu:.2}: ssb {ssb:.3e} bbb {bbb:.3e} dsm {dsm:.3e}"));
        }
    }
    report("6", ok, &detail.join("; "));
    assert!(ok);
}

fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

#[test]
fn criterion_07_shot_noise_scaling() {
    let ncs = [10_000u64, 100_000, 1_000_000, 10_000_000];
    let pure = StateSource::RandomPure {
        d: 2,
        mode: PureMode::Nonneg,
    };
    let mixed = StateSource::Fixed(TrueState::Mixed(reference_qubit_state()));
    let cases = [
        (Protocol::RedsmPure, &pure),
        (Protocol::DsmPure, &pure),
        (Protocol::MubQst, &pure),
        (Protocol::RedsmSsb, &mixed),
        (Protocol::RedsmBbb, &mixed),
        (Protocol::DsmMixed, &mixed),
        (Protocol::MubQst, &mixed),
    ];
    let mut ok = true;
    let mut detail = Vec::new();
    for (protocol, source) in cases {
        let xs: Vec<f64> = ncs.iter().map(|&n| (n as f64).ln()).collect();
        let ys: Vec<f64> = ncs
            .iter()
            .map(|&nc| {
                let config = ProtocolConfig {
                    protocol,
                    theta: FRAC_PI_2,
                    budget: SampleBudget::new(nc, 25, BudgetMode::PaperP0, BatchMode::FixedState).unwrap(),
                    sampling: Sampling::Finite,
                };
                run_batches(&config, source, 7).unwrap().mean.ln()
            })
            .collect();
        let k = slope(&xs, &ys);
        ok &= (k + 0.5).abs() <= 0.1;
        detail.push(format!("{protocol} {k:.3}"));
    }
    report("7", ok, &detail.join("; "));
    assert!(ok);
}

#[test]
fn criterion_08_gate_decomposition() {
    let mut worst: f64 = 0.0;
    for theta in [0.1, FRAC_PI_4, FRAC_PI_2] {
        for n in [0, 1] {
            for layout in [TensorLayout::Pure, TensorLayout::Mixed] {
                let spec = InteractionSpec::new(2, n, theta, layout).unwrap();
                worst = worst.max(decomposed_interaction(&spec).unwrap().max_abs_diff(&interaction(&spec)));
                let (a, b) = decomposition_factors(&spec).unwrap();
                worst = worst.max(a.commutator(&b).max_abs());
            }
        }
    }
    let ok = worst < 1e-12;
    report("8", ok, &format!("worst deviation {worst:.3e}"));
    assert!(ok);
}

fn random_unitary(d: usize, prng: &mut Prng) -> CMatrix {
    let mut u = || 2.0 * prng.uniform() - 1.0;
    let a = CMatrix::from_fn(d, d, |_, _| Cplx::new(u(), u()));
    let h = &a + &a.dagger();
    hermitian_eig(&h).unwrap().apply(|l| Cplx::from_polar(1.0, l))
}

#[test]
fn criterion_09_rebit_equivalence() {
    let mut prng = Prng::new(9);
    let mut worst: f64 = 0.0;
    for k in 0..1000 {
        let d = 2 + k % 3;
        let u = random_unitary(d, &mut prng);
        let psi = random_pure(d, PureMode::Haar, &mut prng);
        let lhs = embed_pure(&u.mul_vec(&psi));
        let rhs = real_form_gate(&u).unwrap().mul_vec(embed_pure(&psi).amplitudes());
        worst = worst.max(lhs.amplitudes().max_abs_diff(&rhs));
    }
    let tau = PI / 3.0;
    let rz = CMatrix::diagonal(&[Cplx::new(1.0, 0.0), Cplx::from_polar(1.0, tau)]);
    let psi = CVector::new(vec![Cplx::new(0.6, 0.0), Cplx::new(0.0, 0.8)]);
    let out = real_form_gate(&rz).unwrap().mul_vec(embed_pure(&psi).amplitudes());
    let expected = [0.6, 0.0, -0.8 * tau.sin(), 0.8 * tau.cos()];
    for (o, e) in out.iter().zip(expected) {
        worst = worst.max((o - Cplx::new(e, 0.0)).norm());
    }
    let ok = worst < 1e-12;
    report("9", ok, &format!("worst deviation {worst:.3e}"));
    assert!(ok);
}

#[test]
fn criterion_10_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let mut s = scenario(ScenarioName::Fig3a);
    s.nc = vec![10_000, 100_000];
    s.batches = 10;
    let mut bytes = Vec::new();
    for k in 0..2 {
        let mut s = s.clone();
        s.out = dir.path().join(format!("run{k}.csv"));
        run_scenario(&s).unwrap();
        bytes.push(std::fs::read(&s.out).unwrap());
    }
    let ok = bytes[0] == bytes[1] && !bytes[0].is_empty();
    report("10", ok, &format!("{} bytes per run", bytes[0].len()));
    assert!(ok);
}
