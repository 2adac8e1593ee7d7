mod common;

use common::*;
use everett_sim::eprb::{EprbConfig, EprbExperiment, S1, S2};
use everett_sim::picture::{cross_check, schmidt_rank, schrodinger_evolve};

#[test]
fn heisenberg_and_schrodinger_agree_on_eprb() {
    let mut r = rng(51);
    for k in 0..100 {
        let exp = EprbExperiment::new(&EprbConfig::new(random_direction(&mut r), random_direction(&mut r), k % 2 == 0)).unwrap();
        let o = &exp.observables;
        for op in [&o.a1, &o.a2, &o.b1, &o.b2, &o.b1.matmul(&o.b2).unwrap()] {
            assert!(cross_check(op, &exp.sequence, &exp.initial).unwrap() < 1e-10);
        }
    }
}

#[test]
fn entangler_creates_schmidt_rank_two_between_particles() {
    let mut r = rng(52);
    let (n1, n2) = (random_direction(&mut r), random_direction(&mut r));
    let ent = EprbExperiment::new(&EprbConfig::new(n1, n2, true)).unwrap();
    let plain = EprbExperiment::new(&EprbConfig::new(n1, n2, false)).unwrap();
    assert_eq!(schmidt_rank(&ent.initial, &[S1]).unwrap(), 1);
    let first = ent.sequence.steps()[0].clone();
    let after_entangler = first.1.apply(&ent.initial).unwrap();
    assert_eq!(schmidt_rank(&after_entangler, &[S1]).unwrap(), 2);
    let done = schrodinger_evolve(&plain.initial, &plain.sequence).unwrap();
    assert_eq!(done.applied, ["t2:U_M1", "t2:U_M2"]);
    // without the entangler, particle 1 and its observer never correlate with particle 2
    assert_eq!(schmidt_rank(&done.state, &["O1", S1]).unwrap(), 1);
    assert!(schmidt_rank(&done.state, &[S2, "nope"]).is_err());
}
