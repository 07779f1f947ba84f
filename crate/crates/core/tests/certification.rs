use hurwitz_core::symkernel::Q;
use hurwitz_core::yeff::{
    certify, certify_scaled, verify_certificate, Certificate, Status, YeffError,
};
use proptest::prelude::*;

#[test]
fn every_target_pair_certifies_and_replays() {
    for (d, g) in hurwitz_core::selftest::CERTIFIED_PAIRS {
        let c = certify(d, g).unwrap();
        assert_eq!(c.status, Status::Certified, "({d},{g})");
        verify_certificate(&c).unwrap();
        // Every enumerated graph carries a bound.
        assert!(c
            .per_graph
            .values()
            .filter(|e| e.enumerated)
            .all(|e| e.lower_bound.is_some()));
    }
}

#[test]
fn certificate_json_round_trips_and_replays() {
    let c = certify(4, 9).unwrap();
    let json = serde_json::to_string(&c).unwrap();
    let back: Certificate = serde_json::from_str(&json).unwrap();
    assert_eq!(serde_json::to_string(&back).unwrap(), json);
    verify_certificate(&back).unwrap();
}

#[test]
fn hand_checked_bounds() {
    let c = certify(3, 4).unwrap();
    let lb = |label: &str| c.per_graph[label].lower_bound.clone().unwrap();
    // Unramified trigonal rule at gR = 1: slack 3g - 6gR = 6, target relevant.
    assert_eq!(lb("L[d3g1] R[d3g1] E[0-0:1 0-0:1 0-0:1]"), Q::int(6));
    let c = certify(5, 16).unwrap();
    let lb = |label: &str| c.per_graph[label].lower_bound.clone().unwrap();
    // Unramified pentagonal rule. Exact ceilings keep the slack at or above 3g - 11/2 gR.
    assert_eq!(
        lb("L[d5g1] R[d5g11] E[0-0:1 0-0:1 0-0:1 0-0:1 0-0:1]"),
        Q::int(44)
    );
    assert_eq!(
        lb("L[d5g6] R[d5g6] E[0-0:1 0-0:1 0-0:1 0-0:1 0-0:1]"),
        Q::int(60)
    );
}

#[test]
fn inadmissible_genus_is_rejected() {
    assert!(matches!(
        certify(4, 10),
        Err(YeffError::NotAdmissible { d: 4, g: 10 })
    ));
    assert!(matches!(
        certify(6, 12),
        Err(YeffError::NotAdmissible { .. })
    ));
}

#[test]
fn forged_bound_fails_replay() {
    let mut c = certify(5, 16).unwrap();
    let (_, entry) = c
        .per_graph
        .iter_mut()
        .find(|(_, e)| e.derivation_chain.len() > 1)
        .unwrap();
    entry.derivation_chain[0].slack += &Q::new(1, 5);
    assert!(matches!(verify_certificate(&c), Err(YeffError::Replay(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn status_and_bounds_scale(num in 1i64..50, den in 1i64..50, pair in 0usize..7) {
        let (d, g) = hurwitz_core::selftest::CERTIFIED_PAIRS[pair];
        let s = Q::new(num, den);
        let base = certify(d, g).unwrap();
        let scaled = certify_scaled(d, g, s.clone()).unwrap();
        prop_assert_eq!(&base.status, &scaled.status);
        for (label, e) in &base.per_graph {
            let want = e.lower_bound.clone().map(|q| &q * &s);
            prop_assert_eq!(&want, &scaled.per_graph[label].lower_bound);
        }
        verify_certificate(&scaled).unwrap();
    }
}
