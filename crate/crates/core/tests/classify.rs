mod common;

use common::*;
use evoalg::algebra::{EvolutionAlgebra, Named};
use evoalg::classify::*;
use evoalg::exec::Exec;
use evoalg::invariants::canonical_presentation;
use evoalg::linalg::Mat;
use evoalg::scalar::{qi, FieldSpec};
use proptest::prelude::*;

fn all_samples() -> Vec<CanonicalLabel> {
    Family::listed()
        .into_iter()
        .flat_map(|f| samples(f, if f == Family::A2(3) { 10 } else { 5 }, 1))
        .collect()
}

#[test]
fn every_family_has_samples() {
    for f in Family::listed() {
        let want = if f.arity() == 0 { 1 } else { 3 };
        assert!(samples(f, 5, 1).len() >= want, "{f}");
    }
}

#[test]
fn representatives_round_trip() {
    for l in all_samples() {
        let r = l.representative(Q).unwrap();
        let c = classify(&r).unwrap_or_else(|e| panic!("{l}: {e}"));
        assert_eq!(c.label.family, l.family, "{l}");
        assert!(is_monomial(&c.witness), "{l} -> {}: witness\n{}", c.label, c.witness);
        let back = c.label.representative(Q).unwrap();
        assert!(verify_iso(&r, &back, &c.witness), "{l}");
        // the chosen parameters are a fixed point
        assert_eq!(classify(&back).unwrap().label, c.label, "{l}");
    }
}

#[test]
fn distinct_labels_are_not_isomorphic() {
    let reps: Vec<(CanonicalLabel, EvolutionAlgebra)> = all_samples()
        .into_iter()
        .map(|l| {
            let c = classify(&l.representative(Q).unwrap()).unwrap().label;
            let r = c.representative(Q).unwrap();
            (c, r)
        })
        .collect();
    for (la, a) in &reps {
        for (lb, b) in &reps {
            if a.dim() != b.dim() {
                continue;
            }
            let v = iso_check(a, b).unwrap();
            assert_eq!(matches!(v, IsoVerdict::Isomorphic(_)), la == lb, "{la} vs {lb}: {v:?}");
        }
    }
}

#[test]
fn residual_symmetries() {
    // A2_2 with alpha and -alpha agree; B3_5/B3_6/B3_7 sign flips
    let a = classify(&alg(&[&["0", "-6"], &["1", "1"]])).unwrap();
    assert_eq!(a.label.to_string(), "A2_2(6)");
    let b = classify(&alg(&[&["1", "1", "-2"], &["0", "0", "1"], &["0", "0", "0"]])).unwrap();
    assert_eq!(b.label.to_string(), "B3_6(2)");
    let c = classify(&alg(&[&["1", "1", "3"], &["0", "0", "-i"], &["2", "2", "1"]])).unwrap();
    assert_eq!(c.label.to_string(), "B3_7(2,3,i)");
    let d = classify(&alg(&[&["1", "2"], &["1", "1"]])).unwrap();
    assert_eq!(d.label.to_string(), "A2_3(1,2)");
}

#[test]
fn iso_pairs() {
    let e3 = EvolutionAlgebra::named(Named::E(3), Q).unwrap();
    let i3 = EvolutionAlgebra::named(Named::I(3), Q).unwrap();
    assert!(matches!(iso_check(&e3, &i3).unwrap(), IsoVerdict::NotIsomorphic(_)));
    let e2 = EvolutionAlgebra::named(Named::E(2), Q).unwrap();
    let i2 = EvolutionAlgebra::named(Named::I(2), Q).unwrap();
    for c in [
        Mat::identity(Q, 2),
        mat(&[&["1", "1"], &["1", "-1"]]),
        mat(&[&["1", "i"], &["i", "1"]]),
    ] {
        assert!(!verify_iso(&e2, &i2, &c));
    }
    let a = alg(&[&["1", "1"], &["2", "1"]]);
    assert!(verify_iso(&a, &a, &Mat::identity(Q, 2)));
}

#[test]
fn cube_root_example() {
    // needs 7th roots in one orientation: falls outside Q(i) but approx mode labels it
    let a = alg(&[&["0", "0", "5"], &["2", "0", "0"], &["0", "3", "0"]]);
    match classify(&a) {
        Err(ClassifyError::ExtensionRequired(_)) => {}
        other => panic!("{other:?}"),
    }
    let ap = a.convert(FieldSpec::approx(1e-9).unwrap()).unwrap();
    assert_eq!(classify(&ap).unwrap().label.family, Family::A3(1));
}

#[test]
fn dim_four_square1_and_2li() {
    let e4 = EvolutionAlgebra::named(Named::E(4), Q).unwrap();
    let c = mat(&[
        &["1", "0", "0", "0"],
        &["0", "3/5", "-4/5", "0"],
        &["0", "4/5", "3/5", "0"],
        &["0", "0", "0", "-1"],
    ]);
    let b = e4.change_basis(&c).unwrap();
    assert!(matches!(iso_check(&e4, &b).unwrap(), IsoVerdict::Isomorphic(_)));
    // 4-cycle versus a scaled, relabelled copy
    let a = alg(&[
        &["0", "0", "0", "1"],
        &["1", "0", "0", "0"],
        &["0", "1", "0", "0"],
        &["0", "0", "1", "0"],
    ]);
    let p = Mat::permutation(Q, &[2, 3, 0, 1])
        .matmul(&Mat::diag(Q, &[qi("2"), qi("4"), qi("16"), qi("256")]))
        .unwrap();
    let b = a.change_basis(&p);
    if let Ok(b) = b {
        let IsoVerdict::Isomorphic(w) = iso_check(&a, &b).unwrap() else {
            panic!()
        };
        assert!(verify_iso(&a, &b, &w));
    }
    let n4 = alg(&[
        &["0", "0", "0", "1"],
        &["1", "0", "0", "0"],
        &["0", "1", "0", "0"],
        &["0", "0", "1", "1"],
    ]);
    assert!(matches!(iso_check(&a, &n4).unwrap(), IsoVerdict::NotIsomorphic(_)));
}

#[test]
fn automorphisms_pass_semantic_check() {
    for n in 2..=4 {
        let e = EvolutionAlgebra::named(Named::E(n), Q).unwrap();
        let i = EvolutionAlgebra::named(Named::I(n), Q).unwrap();
        let mut r = rng(7 + n as u64);
        for _ in 0..20 {
            let q = random_conformal(&mut r, Q, n - 1);
            let q = q.scale(
                &q.col(0)
                    .iter()
                    .fold(qi("0"), |a, x| a + x * x)
                    .sqrt()
                    .map(|s| s.inv().unwrap())
                    .unwrap_or(qi("1")),
            );
            if let Ok(phi) = gen_automorphism_e(n, &q) {
                assert!(is_automorphism_e(n, &phi));
                assert!(verify_iso(&e, &e, &phi));
            }
            let cand = random_conformal(&mut r, Q, n);
            assert_eq!(is_automorphism_e(n, &cand), verify_iso(&e, &e, &cand));
            assert_eq!(is_automorphism_i(n, &cand), verify_iso(&i, &i, &cand));
        }
    }
    for x in ["0", "1", "2", "i", "-3/7", "1+i"] {
        let i2 = EvolutionAlgebra::named(Named::I(2), Q).unwrap();
        let phi = gen_automorphism_i2(&qi(x)).unwrap();
        assert!(is_automorphism_i(2, &phi));
        assert!(verify_iso(&i2, &i2, &phi));
    }
    assert!(is_automorphism_e(2, &Mat::diag(Q, &[qi("1"), qi("-1")])));
    assert!(!is_automorphism_e(2, &Mat::diag(Q, &[qi("1"), qi("2")])));
    let e2 = EvolutionAlgebra::named(Named::E(2), Q).unwrap();
    assert!(!verify_iso(&e2, &e2, &Mat::diag(Q, &[qi("1"), qi("2")])));
}

fn orbit_case(l: &CanonicalLabel, g_seed: u64) {
    let r = l.representative(Q).unwrap();
    let want = classify(&r).unwrap().label;
    let p = canonical_presentation(&r).unwrap();
    let types: Vec<_> = p.blocks.iter().map(|(t, _)| *t).collect();
    let mut rr = rng(g_seed);
    let g = GroupElement::random(&mut rr, &types);
    assert!(g.is_valid(&types));
    let c = p.witness.matmul(&g.matrix(Q, &types)).unwrap();
    let a = r.change_basis(&c).unwrap();
    let got = classify(&a).unwrap_or_else(|e| panic!("{l} under {c}: {e}"));
    assert_eq!(got.label, want, "{l}");
    assert!(verify_iso(&a, &want.representative(Q).unwrap(), &got.witness));
    // composed witness back to the original representative
    let back = c.inverse().unwrap();
    let IsoVerdict::Isomorphic(w) = iso_check(&r, &a).unwrap() else {
        panic!("{l}")
    };
    assert!(verify_iso(&r, &a, &w));
    assert!(verify_iso(&a, &r, &back));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]
    #[test]
    fn orbit_soundness(fi in 0usize..32, si in 0usize..5, g in any::<u64>()) {
        let fams = Family::listed();
        let f = fams[fi % fams.len()];
        let s = samples(f, 5, 1);
        orbit_case(&s[si % s.len()], g);
    }

    #[test]
    fn iso_is_symmetric(fi in 0usize..32, g in any::<u64>()) {
        let fams = Family::listed();
        let f = fams[fi % fams.len()];
        let l = &samples(f, 5, 1)[0];
        let r = l.representative(Q).unwrap();
        let p = canonical_presentation(&r).unwrap();
        let types: Vec<_> = p.blocks.iter().map(|(t, _)| *t).collect();
        let ge = GroupElement::random(&mut rng(g), &types);
        let a = r.change_basis(&p.witness.matmul(&ge.matrix(Q, &types)).unwrap()).unwrap();
        let (x, y) = (iso_check(&r, &a).unwrap(), iso_check(&a, &r).unwrap());
        match (x, y) {
            (IsoVerdict::Isomorphic(u), IsoVerdict::Isomorphic(v)) => {
                prop_assert!(verify_iso(&r, &a, &u));
                prop_assert!(verify_iso(&a, &r, &u.inverse().unwrap()));
                prop_assert!(verify_iso(&a, &r, &v));
            }
            other => prop_assert!(false, "{:?}", other),
        }
    }

    #[test]
    fn permutation_search_agrees_with_labels(ia in 0usize..10, ib in 0usize..10, g in any::<u64>()) {
        let fams: Vec<Family> = (1..=7).map(Family::A3).collect();
        let pick = |i: usize| {
            let s = samples(fams[i % 7], 5, 1);
            s[i % s.len()].representative(Q).unwrap()
        };
        let a = pick(ia);
        let mut b = pick(ib);
        if g % 2 == 0 {
            let p = canonical_presentation(&b).unwrap();
            let types: Vec<_> = p.blocks.iter().map(|(t, _)| *t).collect();
            let ge = GroupElement::random(&mut rng(g), &types);
            b = b.change_basis(&ge.matrix(Q, &types)).unwrap();
        }
        let by_label = classify(&a).unwrap().label == classify(&b).unwrap().label;
        let by_search = match permutation_search(&a, &b, Exec::Sequential) {
            SearchOutcome::Found(c) => { prop_assert!(verify_iso(&a, &b, &c)); true }
            _ => false,
        };
        prop_assert_eq!(by_label, by_search);
    }
}
