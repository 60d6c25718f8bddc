//! Exact values frozen from an independent brute-force evaluation, for inputs
//! where hand-derived expectations turned out to be off.

use fairdiv::arith::rational;
use fairdiv::criteria::{ef1_ratio, efx_ratio, gmms_ratio, mms_ratio, pmms_ratio};
use fairdiv::generators::{appendix_a, gen_adversarial, AdversarialSpec};
use fairdiv::model::{FairRatio, Witness};
use fairdiv::shares::OracleLimits;
use fairdiv::{Rational, Value};

fn ratio(n: i64, d: i64) -> FairRatio {
    FairRatio::Finite(Value::from(rational(n, d)))
}

#[test]
fn worked_example_efx_binds_on_third_bundle() {
    let (inst, a, _) = appendix_a();
    let report = efx_ratio(&inst, &a).unwrap();
    // Agent 2 against {b, e}: 12 / (8 + 5 - 5).
    assert_eq!(report.ratio, ratio(3, 2));
    assert_eq!(
        report.witness,
        Some(Witness {
            agent: 1,
            against: vec![2],
            removed_good: Some(4),
        })
    );
}

#[test]
fn worked_example_other_ratios() {
    let (inst, a, a_prime) = appendix_a();
    let limits = OracleLimits::default();
    assert_eq!(fairdiv::criteria::ef_ratio(&inst, &a).unwrap().ratio, ratio(12, 13));
    assert_eq!(ef1_ratio(&inst, &a).unwrap().ratio, ratio(2, 1));
    assert_eq!(mms_ratio(&inst, &a, &limits).unwrap().ratio, ratio(1, 1));
    assert_eq!(pmms_ratio(&inst, &a, &limits).unwrap().ratio, ratio(1, 1));
    assert_eq!(gmms_ratio(&inst, &a, &limits).unwrap().ratio, ratio(1, 1));
    assert_eq!(fairdiv::criteria::ef_ratio(&inst, &a_prime).unwrap().ratio, ratio(2, 5));
}

/// `(k, alpha, ef1)` for the adversarial family with `n = 3`.
const EF1: [(usize, (i64, i64), (i64, i64)); 6] = [
    (1, (1, 4), (50, 177)),
    (1, (1, 2), (25, 38)),
    (1, (5, 9), (500, 659)),
    (2, (1, 4), (100, 529)),
    (2, (1, 2), (100, 227)),
    (2, (5, 9), (125, 246)),
];

#[test]
fn adversarial_family_exact_ratios() {
    let limits = OracleLimits::default();
    for (k, (an, ad), (en, ed)) in EF1 {
        for beta in [rational(1, 4), rational(1, 2)] {
            let alpha = rational(an, ad);
            let spec = AdversarialSpec {
                n: 3,
                k,
                alpha: alpha.clone(),
                beta: beta.clone(),
            };
            let (inst, alloc) = gen_adversarial(&spec).unwrap();
            let exact = |r: Rational| FairRatio::Finite(Value::from(r));
            let hundredth = rational(100, 101);
            assert_eq!(pmms_ratio(&inst, &alloc, &limits).unwrap().ratio, exact(alpha.clone()));
            assert_eq!(gmms_ratio(&inst, &alloc, &limits).unwrap().ratio, exact(&alpha * &hundredth));
            assert_eq!(mms_ratio(&inst, &alloc, &limits).unwrap().ratio, exact(&alpha * &hundredth));
            assert_eq!(efx_ratio(&inst, &alloc).unwrap().ratio, exact(&alpha * &beta / rational(2, 1)));
            assert_eq!(ef1_ratio(&inst, &alloc).unwrap().ratio, ratio(en, ed), "k={k} alpha={alpha}");
        }
    }
}

#[test]
fn adversarial_other_agents_do_not_envy() {
    let spec = AdversarialSpec {
        n: 5,
        k: 2,
        alpha: rational(1, 3),
        beta: rational(2, 3),
    };
    let (inst, alloc) = gen_adversarial(&spec).unwrap();
    for i in 1..5 {
        for j in (0..5).filter(|&j| j != i) {
            let own = inst.bundle_value(i, alloc.bundle(i)).unwrap();
            let other = inst.bundle_value(i, alloc.bundle(j)).unwrap();
            assert!(own >= other);
        }
    }
}
