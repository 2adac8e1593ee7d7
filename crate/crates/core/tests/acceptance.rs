//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

mod common;

use std::time::{Duration, Instant};

use common::*;
use everett_sim::config::parse_config;
use everett_sim::eprb::{run_eprb, EprbConfig, EprbExperiment};
use everett_sim::ghzm::{run_ghzm, GhzmConfig, GhzmExperiment};
use everett_sim::labels::support;
use everett_sim::lhv::{eprb_q_max, ghz_constrained_sets};
use everett_sim::measurement::{
    heisenberg_evolve, measurement_unitary, shift_operator, spin_projector, spin_projectors,
    BetaPreset, InteractionSequence, ObserverSpec, SpinOutcome,
};
use everett_sim::picture::cross_check;
use everett_sim::run::{execute, Cell};
use everett_sim::tensor::{embed, kron, Layout, Operator};
use everett_sim::Direction;
use rand::Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn num(c: &Cell) -> f64 {
    match c {
        Cell::Num(x) => *x,
        Cell::Text(t) => panic!("expected a number, found {t}"),
    }
}

fn bell_quantity() -> Outcome {
    let start = Instant::now();
    let report = execute(&parse_config("[bell-q]\n").unwrap()).unwrap();
    let elapsed = start.elapsed();
    let addends: Vec<f64> = report.rows[..3].iter().map(|r| num(&r[4])).collect();
    let q = num(&report.rows[3][4]);
    let worst = addends.iter().map(|a| (a - 0.375).abs()).fold((q - 1.125).abs(), f64::max);
    outcome(
        worst < 1e-10 && elapsed < Duration::from_secs(1),
        format!("Q = {q}, addends {addends:?}, max error {worst:.1e}, {elapsed:.2?}"),
    )
}

fn singlet_correlation_law() -> Outcome {
    let start = Instant::now();
    let mut r = rng(101);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let (n1, n2) = (random_direction(&mut r), random_direction(&mut r));
        let d = dot(&n1, &n2);
        let spin = run_eprb(&EprbConfig::new(n1, n2, true)).unwrap();
        let prob = run_eprb(&EprbConfig::new(n1, n2, true).with_preset(BetaPreset::Probability)).unwrap();
        worst = worst
            .max((spin.mean_b1b2 + d).abs())
            .max((prob.mean_b1b2 - (1.0 - d) / 4.0).abs());
    }
    let elapsed = start.elapsed();
    outcome(
        worst < 1e-10 && elapsed < Duration::from_secs(5),
        format!("1000 pairs, max error {worst:.1e}, {elapsed:.2?}"),
    )
}

fn perfect_anticorrelation() -> Outcome {
    let mut r = rng(102);
    let worst = (0..100)
        .map(|_| {
            let n = random_direction(&mut r);
            run_eprb(&EprbConfig::new(n, n, true)).unwrap().p_uu.abs()
        })
        .fold(0.0, f64::max);
    outcome(worst < 1e-12, format!("100 directions, max P_uu(n,n) {worst:.1e}"))
}

fn nonentangled_factorization() -> Outcome {
    let mut r = rng(103);
    let (mut fact, mut closed) = (0.0f64, 0.0f64);
    for _ in 0..1000 {
        let (n1, n2) = (random_direction(&mut r), random_direction(&mut r));
        let beta = BetaPreset::Spin.values();
        let rep = run_eprb(&EprbConfig::new(n1, n2, false)).unwrap();
        let (c1, s1) = ((n1.theta / 2.0).cos().powi(2), (n1.theta / 2.0).sin().powi(2));
        let (c2, s2) = ((n2.theta / 2.0).cos().powi(2), (n2.theta / 2.0).sin().powi(2));
        // particle 1 starts up and particle 2 down along z
        let m1 = beta[1] * c1 + beta[2] * s1;
        let m2 = beta[1] * s2 + beta[2] * c2;
        fact = fact.max((rep.mean_b1b2 - rep.mean_b1 * rep.mean_b2).abs());
        closed = closed
            .max((rep.mean_b1b2 - m1 * m2).abs())
            .max((rep.mean_b1 - m1).abs())
            .max((rep.mean_b2 - m2).abs());
    }
    outcome(
        fact < 1e-10 && closed < 1e-10,
        format!("1000 pairs, factorization error {fact:.1e}, closed-form error {closed:.1e}"),
    )
}

fn ghz_parity() -> Outcome {
    let start = Instant::now();
    let mut worst_fixed = 0.0f64;
    for (phis, want) in [
        ([0.0, 90.0, 90.0], 0.0),
        ([90.0, 0.0, 90.0], 0.0),
        ([90.0, 90.0, 0.0], 0.0),
        ([0.0, 0.0, 0.0], 1.0),
    ] {
        let p = run_ghzm(&GhzmConfig::transverse_degrees(phis, true)).unwrap();
        worst_fixed = worst_fixed.max((p - want).abs());
    }
    let mut r = rng(104);
    let mut worst_sweep = 0.0f64;
    for _ in 0..100 {
        let phis = [r.gen_range(0.0..360.0), r.gen_range(0.0..360.0), r.gen_range(0.0..360.0)];
        let p = run_ghzm(&GhzmConfig::transverse_degrees(phis, true)).unwrap();
        let sum: f64 = phis.iter().map(|d: &f64| d.to_radians()).sum();
        worst_sweep = worst_sweep.max((p - (1.0 + sum.cos()) / 2.0).abs());
    }
    let unent = run_ghzm(&GhzmConfig::transverse_degrees([0.0, 90.0, 90.0], false)).unwrap();
    let unent_err = (unent - 0.5).abs();
    let elapsed = start.elapsed();
    outcome(
        worst_fixed < 1e-10 && worst_sweep < 1e-10 && unent_err < 1e-10 && elapsed < Duration::from_secs(30),
        format!(
            "Mermin settings error {worst_fixed:.1e}, 100-point sweep error {worst_sweep:.1e}, unentangled {unent}, {elapsed:.2?}"
        ),
    )
}

fn lhv_gap() -> Outcome {
    let (q_max, _) = eprb_q_max();
    let v = ghz_constrained_sets();
    let classical = v.classical_p_even_000();
    let quantum_q = 1.125;
    let quantum_p = run_ghzm(&GhzmConfig::transverse_degrees([0.0; 3], true)).unwrap();
    outcome(
        q_max == 1.0 && v.all_odd_at_000() && classical == 0.0 && q_max < quantum_q && classical != quantum_p,
        format!(
            "max Q = {q_max} < {quantum_q}; {}/{} sets survive, classical P_eu(0,0,0) = {classical} vs quantum {quantum_p:.12}",
            v.survivors.len(),
            v.examined
        ),
    )
}

fn picture_equivalence() -> Outcome {
    let mut r = rng(105);
    let mut worst_eprb = 0.0f64;
    for k in 0..500 {
        let cfg = EprbConfig::new(random_direction(&mut r), random_direction(&mut r), k % 2 == 0);
        let exp = EprbExperiment::new(&cfg).unwrap();
        let o = &exp.observables;
        for op in [&o.b1, &o.b2, &o.b1.matmul(&o.b2).unwrap()] {
            worst_eprb = worst_eprb.max(cross_check(op, &exp.sequence, &exp.initial).unwrap());
        }
    }
    let mut worst_ghzm = 0.0f64;
    for k in 0..100 {
        let n = [random_direction(&mut r), random_direction(&mut r), random_direction(&mut r)];
        let exp = GhzmExperiment::new(&GhzmConfig::new(n, k % 4 != 0)).unwrap();
        worst_ghzm = worst_ghzm.max(cross_check(&exp.g, &exp.sequence, &exp.initial).unwrap());
    }
    outcome(
        worst_eprb < 1e-10 && worst_ghzm < 1e-10,
        format!("500 EPRB max residual {worst_eprb:.1e}, 100 GHZM max residual {worst_ghzm:.1e}"),
    )
}

fn label_ledger() -> Outcome {
    let mut r = rng(106);
    let mut ok = true;
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let (n1, n2) = (random_direction(&mut r), random_direction(&mut r));
        let plain = EprbExperiment::new(&EprbConfig::new(n1, n2, false)).unwrap();
        let ent = EprbExperiment::new(&EprbConfig::new(n1, n2, true)).unwrap();
        let chain = [
            (support(&plain.observables.b1), vec!["O1"]),
            (support(&plain.evolve(&plain.observables.b1).unwrap()), vec!["O1", "S1"]),
            (support(&ent.evolve(&ent.observables.b1).unwrap()), vec!["O1", "S1", "S2"]),
        ];
        for (s, want) in &chain {
            ok &= s.labels() == *want;
            worst = worst.max(s.max_excluded_residual());
        }
    }
    outcome(
        ok && worst < 1e-12,
        format!("{{O1}} ⊂ {{O1, S1}} ⊂ {{O1, S1, S2}} on 20 direction pairs: {ok}, max excluded residual {worst:.1e}"),
    )
}

fn structural_identities() -> Outcome {
    let mut r = rng(107);
    // observer records the shifted eigenvalue: U† (b ⊗ I) U = Σ u_i† b u_i ⊗ Π_i
    let layout = Layout::new([("O", 3), ("S", 2)]).unwrap();
    let mut reconstruction = 0.0f64;
    for _ in 0..200 {
        let beta: Vec<f64> = loop {
            let v: Vec<f64> = (0..3).map(|_| r.gen_range(-4.0..4.0)).collect();
            if (v[0] - v[1]).abs() > 1e-3 && (v[0] - v[2]).abs() > 1e-3 && (v[1] - v[2]).abs() > 1e-3 {
                break v;
            }
        };
        let spec = ObserverSpec::new("O", &beta).unwrap();
        let n = random_direction(&mut r);
        let projectors = spin_projectors(n, "S").unwrap();
        let u = measurement_unitary(&layout, "O", "S", &projectors, &spec).unwrap();
        let b = spec.observable();
        let evolved = heisenberg_evolve(&embed(&b, &layout).unwrap(), &InteractionSequence::new().then("U_M", u).unwrap()).unwrap();
        let mut expected = Operator::zeros(&layout);
        for (i, p) in projectors.iter().enumerate() {
            let ui = shift_operator(&spec, i + 1).unwrap();
            let term = kron(&ui.adjoint().matmul(&b).unwrap().matmul(&ui).unwrap(), p).unwrap();
            expected = expected.add(&term).unwrap();
        }
        reconstruction = reconstruction.max(evolved.distance(&expected).unwrap());
    }

    let eprb = everett_sim::eprb::eprb_layout();
    let spin = BetaPreset::Spin.values();
    let mut commutator = 0.0f64;
    for _ in 0..200 {
        let (n1, n2) = (random_direction(&mut r), random_direction(&mut r));
        let u1 = measurement_unitary(&eprb, "O1", "S1", &spin_projectors(n1, "S1").unwrap(), &ObserverSpec::new("O1", &spin).unwrap()).unwrap();
        let u2 = measurement_unitary(&eprb, "O2", "S2", &spin_projectors(n2, "S2").unwrap(), &ObserverSpec::new("O2", &spin).unwrap()).unwrap();
        commutator = commutator.max(u1.commutator_norm(&u2).unwrap());
    }

    let id = Operator::identity(&Layout::single("S", 2).unwrap());
    let mut completeness = 0.0f64;
    for _ in 0..1000 {
        let n: Direction = random_direction(&mut r);
        let sum = spin_projector(n, SpinOutcome::Up).add(&spin_projector(n, SpinOutcome::Down)).unwrap();
        completeness = completeness.max(sum.distance(&id).unwrap());
    }
    outcome(
        reconstruction < 1e-12 && commutator < 1e-12 && completeness < 1e-12,
        format!(
            "reconstruction {reconstruction:.1e}, ‖[U_M1, U_M2]‖ {commutator:.1e}, completeness {completeness:.1e}"
        ),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 9] = [
        ("Bell quantity Q = 9/8 with addends 3/8", bell_quantity),
        ("singlet correlation law", singlet_correlation_law),
        ("perfect anti-correlation", perfect_anticorrelation),
        ("nonentangled factorization", nonentangled_factorization),
        ("GHZ parity probabilities", ghz_parity),
        ("instruction-set gap", lhv_gap),
        ("Heisenberg/Schrödinger equivalence", picture_equivalence),
        ("observer support chain", label_ledger),
        ("structural identities", structural_identities),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let result = std::panic::catch_unwind(check).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            outcome(false, format!("panicked: {msg}"))
        });
        if !result.pass {
            failed += 1;
        }
        println!(
            "criterion {}: {} {name}: {}",
            k + 1,
            if result.pass { "PASS" } else { "FAIL" },
            result.detail
        );
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all 9 acceptance criteria passed");
}
