use segrekit_core::bounds::{lemma_2_8_trials, verify_lemma_2_8, DiskPoly};

#[test]
fn ten_thousand_random_polynomials_respect_the_bounds() {
    let mut certified = 0;
    for m in 1..=16u32 {
        let rep = lemma_2_8_trials(m, 625, 42).unwrap();
        assert!(rep.violations.is_empty(), "m = {m}: {:?}", rep.violations);
        assert!(rep.max_coeff_ratio <= 1.0);
        assert!(rep.max_sup_ratio <= 1.0 + 1e-12);
        certified += rep.certified;
    }
    assert!(certified >= 9_900, "only {certified} certified");
}

#[test]
fn extremal_family_attains_the_constant() {
    for m in 1..=16 {
        let rep = verify_lemma_2_8(&DiskPoly::extremal(m).unwrap()).unwrap();
        assert!(rep.attains_c_m && rep.passed());
        assert_eq!(lemma_2_8_trials(m, 1, 0).unwrap().extremal_gap, "0");
    }
}
