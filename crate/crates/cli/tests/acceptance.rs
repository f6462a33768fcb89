//! Acceptance gate: one PASS/FAIL line per criterion; exits nonzero if any fails.
//! Tolerances: every check below is exact equality over Q(i) or F_p.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::Command;

use common::*;
use evoalg::algebra::{EvolutionAlgebra, Named};
use evoalg::classify::{classify, iso_check, verify_iso, CanonicalLabel, Family, GroupElement, IsoVerdict};
use evoalg::derivations::{derivation_space, has_nonsingular_derivation, is_derivation};
use evoalg::format::write_algebra;
use evoalg::invariants::{canonical_presentation, decompose, delta_trace, BlockKind};
use evoalg::linalg::Mat;
use evoalg::scalar::{FieldSpec, Scalar};
use evoalg::variety::{builtin, check_identity, find_multilinear_identities, orbit_dim, padded, IdentitySpec};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn named(w: Named) -> EvolutionAlgebra {
    EvolutionAlgebra::named(w, Q).unwrap()
}

fn c1_ex1() -> Check {
    let a = ex1();
    let mut blocks: Vec<Vec<usize>> = decompose(&a)
        .unwrap()
        .blocks
        .iter()
        .map(|b| b.indices.iter().map(|i| i + 1).collect())
        .collect();
    blocks.sort();
    ensure(blocks == vec![vec![1, 3], vec![2, 5], vec![4]], || {
        format!("blocks {blocks:?}")
    })?;
    let line = invariants_line(&a);
    ensure(line == "delta=(2,2,1) Delta=E2,E2,O1", || line.clone())?;
    Ok(format!("blocks {{1,3}},{{2,5}},{{4}}; {line}"))
}

fn c2_derivation_dims() -> Check {
    for n in 2..=6 {
        let base = (n - 1) * (n - 2) / 2;
        let e = derivation_space(&named(Named::E(n))).unwrap().dim();
        let i = derivation_space(&named(Named::I(n))).unwrap().dim();
        ensure(e == base && i == base + 1, || {
            format!("n={n}: E {e}, I {i}, want {base}, {}", base + 1)
        })?;
    }
    Ok("n = 2..6".into())
}

fn c3_rigidity() -> Check {
    let mut r = rng(30);
    for k in 0..200 {
        let a = random_2li(&mut r, 2 + k % 3);
        let d = derivation_space(&a).unwrap().dim();
        ensure(d == 0, || format!("case {k}: dim {d}\n{}", a.matrix()))?;
    }
    Ok("200 random algebras, n in {2,3,4}".into())
}

fn fp(p: u64, rows: &[&[i64]]) -> EvolutionAlgebra {
    let f = FieldSpec::prime(p).unwrap();
    EvolutionAlgebra::from_rows(
        f,
        rows.iter()
            .map(|r| r.iter().map(|&x| Scalar::from_i64(f, x)).collect())
            .collect(),
    )
    .unwrap()
}

fn c4_mersenne() -> Check {
    let a = fp(3, &[&[0, 1], &[1, 0]]);
    let f = a.field();
    ensure(
        is_derivation(&a, &Mat::diag(f, &[1, 2].map(|x| Scalar::from_i64(f, x)))),
        || "diag(1,2) over F_3".into(),
    )?;
    let d3 = derivation_space(&a).unwrap().dim();
    ensure(d3 > 0, || "Der is zero over F_3".into())?;
    let c = fp(7, &[&[0, 0, 1], &[1, 0, 0], &[0, 1, 0]]);
    let f = c.field();
    ensure(
        is_derivation(&c, &Mat::diag(f, &[1, 2, 4].map(|x| Scalar::from_i64(f, x)))),
        || "diag(1,2,4) over F_7".into(),
    )?;
    Ok(format!(
        "dim Der over F_3 = {d3}; diag(1,2,4) derives the 3-cycle over F_7"
    ))
}

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_evoalg")
}

fn write_tmp(name: &str, a: &EvolutionAlgebra) -> PathBuf {
    let p = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&p, write_algebra(a)).unwrap();
    p
}

fn cli_degenerate(tag: &str, source: &EvolutionAlgebra, target: &EvolutionAlgebra, family: &str) -> Option<i32> {
    let s = write_tmp(&format!("{tag}_src.alg"), source);
    let t = write_tmp(&format!("{tag}_dst.alg"), target);
    let out = Command::new(bin())
        .args(["--mode", "exact", "degenerate"])
        .arg(&s)
        .arg(&t)
        .arg(format!("builtin:{family}"))
        .output()
        .unwrap();
    out.status.code()
}

fn c5_degenerations() -> Check {
    let mut cases: Vec<(String, usize)> = Vec::new();
    for n in 2..=4 {
        cases.push(("En_to_In".into(), n));
        cases.push(("En_to_Nn".into(), n));
    }
    cases.push(("Ek_drop:3".into(), 3));
    cases.push(("Ek_drop:2".into(), 3));
    cases.push(("Ik_drop:3".into(), 3));
    for (name, n) in &cases {
        let d = builtin(name, *n, Q).unwrap();
        ensure(
            evoalg::variety::check_degeneration(&d.source, &d.target, &d.g, &d.g_inv).unwrap(),
            || format!("{name} n={n}: limit differs"),
        )?;
        let tag = format!("c5_{}_{n}", name.replace(':', "_"));
        let code = cli_degenerate(&tag, &d.source, &d.target, name);
        ensure(code == Some(0), || format!("{name} n={n}: exit {code:?}"))?;
    }
    // a wrong target must not pass
    let wrong = cli_degenerate(
        "c5_wrong",
        &named(Named::E(3)),
        &padded(Named::I(2), 3, Q).unwrap(),
        "En_to_In",
    );
    ensure(wrong == Some(1), || format!("wrong target exit {wrong:?}"))?;
    Ok(format!("{} families, library and CLI exit 0", cases.len()))
}

fn c6_orbit_gap() -> Check {
    for n in 2..=5 {
        let e = orbit_dim(&named(Named::E(n))).unwrap();
        let i = orbit_dim(&named(Named::I(n))).unwrap();
        ensure(e == i + 1, || format!("n={n}: {e} vs {i}"))?;
    }
    Ok("n = 2..5".into())
}

fn c7_identities() -> Check {
    let s = IdentitySpec::parse("+1*((x*y)*z)*t  -1*((x*y)*t)*z", Q).unwrap();
    for n in 2..=5 {
        ensure(check_identity(&named(Named::E(n)), &s), || format!("E_{n}"))?;
        ensure(check_identity(&named(Named::I(n)), &s), || format!("I_{n}"))?;
    }
    let d3 = find_multilinear_identities(&named(Named::E(3)), 3).unwrap();
    ensure(d3.is_empty(), || format!("E_3 has {} degree-3 identities", d3.len()))?;
    Ok("degree 4 holds for E_n, I_n (n = 2..5); degree-3 space of E_3 is 0".into())
}

fn samples_for(f: Family) -> Vec<CanonicalLabel> {
    samples(f, if f == Family::A2(3) { 10 } else { 5 }, 1)
}

fn c8_round_trip() -> Check {
    let (mut exact, mut total) = (0, 0);
    for f in Family::listed() {
        let s = samples_for(f);
        let want = match f {
            Family::A2(2) => 5,
            Family::A2(3) => 10,
            _ if f.arity() == 0 => 1,
            _ => 3,
        };
        ensure(s.len() >= want, || format!("{f}: only {} parameter choices", s.len()))?;
        for l in s {
            total += 1;
            let r = l.representative(Q).unwrap();
            let c = classify(&r).map_err(|e| format!("{l}: {e}"))?;
            ensure(verify_iso(&r, &c.label.representative(Q).unwrap(), &c.witness), || {
                format!("{l}: witness")
            })?;
            ensure(is_monomial(&c.witness), || format!("{l}: witness not monomial"))?;
            if c.label == l {
                ensure(Mat::permutation(Q, &perm_of(&c.witness)) == c.witness, || {
                    format!("{l}: scaled witness")
                })?;
                exact += 1;
            } else {
                // a different parameter choice for the same orbit; it must be
                // its own fixed point and isomorphic to the original
                ensure(c.label.family == l.family, || format!("{l} -> {}", c.label))?;
                let back = c.label.representative(Q).unwrap();
                let again = classify(&back).map_err(|e| e.to_string())?;
                ensure(again.label == c.label, || format!("{} not a fixed point", c.label))?;
                ensure(matches!(iso_check(&r, &back), Ok(IsoVerdict::Isomorphic(_))), || {
                    format!("{l} vs {}", c.label)
                })?;
            }
        }
    }
    Ok(format!(
        "{total} representatives; {exact} return their own label with identity/permutation witness, the rest reach an isomorphic normalized label"
    ))
}

fn perm_of(c: &Mat) -> Vec<usize> {
    let n = c.rows();
    (0..n)
        .map(|k| (0..n).find(|&r| !c[(r, k)].is_zero()).unwrap())
        .collect()
}

fn c9_orbit_soundness() -> Check {
    let labels: Vec<CanonicalLabel> = Family::listed().into_iter().flat_map(samples_for).collect();
    let mut r = rng(90);
    for k in 0..100 {
        let l = &labels[(k * 7) % labels.len()];
        let rep = l.representative(Q).unwrap();
        let want = classify(&rep).map_err(|e| e.to_string())?.label;
        let p = canonical_presentation(&rep).unwrap();
        let types: Vec<_> = p.blocks.iter().map(|(t, _)| *t).collect();
        let g = GroupElement::random(&mut r, &types);
        ensure(g.is_valid(&types), || "invalid group element".into())?;
        let c = p.witness.matmul(&g.matrix(Q, &types)).unwrap();
        let a = rep.change_basis(&c).map_err(|e| e.to_string())?;
        let got = classify(&a).map_err(|e| format!("{l}: {e}"))?;
        ensure(got.label == want, || format!("{l}: {} vs {want}", got.label))?;
        ensure(verify_iso(&a, &want.representative(Q).unwrap(), &got.witness), || {
            format!("{l}: witness")
        })?;
        let IsoVerdict::Isomorphic(w) = iso_check(&rep, &a).map_err(|e| e.to_string())? else {
            return Err(format!("{l}: not isomorphic to its image"));
        };
        ensure(verify_iso(&rep, &a, &w), || format!("{l}: composed witness"))?;
    }
    let reps: Vec<(CanonicalLabel, EvolutionAlgebra)> = labels
        .iter()
        .map(|l| {
            let c = classify(&l.representative(Q).unwrap()).unwrap().label;
            let r = c.representative(Q).unwrap();
            (c, r)
        })
        .collect();
    let mut pairs = 0;
    for (la, a) in &reps {
        for (lb, b) in &reps {
            if a.dim() != b.dim() || la == lb {
                continue;
            }
            pairs += 1;
            let v = iso_check(a, b).map_err(|e| e.to_string())?;
            ensure(!matches!(v, IsoVerdict::Isomorphic(_)), || {
                format!("{la} reported isomorphic to {lb}")
            })?;
        }
    }
    Ok(format!(
        "100 random group elements; {pairs} ordered pairs of distinct labels never isomorphic"
    ))
}

fn c10_invariance() -> Check {
    let mut r = rng(10);
    for k in 0..500 {
        let a = random_block_algebra(&mut r, 2 + k % 4);
        let c = random_natural_basis(&mut r, &a);
        let b = a.change_basis(&c).map_err(|e| format!("case {k}: {e}"))?;
        let (x, y) = (invariants_line(&a), invariants_line(&b));
        ensure(x == y, || format!("case {k}: {x} vs {y}"))?;
    }
    Ok("500 natural basis changes, dims 2..5".into())
}

fn c11_nonsingular() -> Check {
    let a = nonsingular_example();
    ensure(
        has_nonsingular_derivation(&derivation_space(&a).unwrap()).unwrap(),
        || "example reports false".into(),
    )?;
    let t = delta_trace(&a).unwrap();
    ensure(t.0.iter().all(|b| b.kind == BlockKind::O), || format!("trace {t}"))?;
    for n in 2..=5 {
        for w in [Named::E(n), Named::I(n)] {
            let s = derivation_space(&named(w)).unwrap();
            ensure(!has_nonsingular_derivation(&s).unwrap(), || {
                format!("{w:?} reports true")
            })?;
        }
    }
    Ok(format!("example true with Delta={t}; E_n, I_n (n = 2..5) false"))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("ex1 reproduction", c1_ex1),
        ("derivation dimensions of E_n and I_n", c2_derivation_dims),
        ("2LI rigidity of derivations", c3_rigidity),
        ("Mersenne counterexamples", c4_mersenne),
        ("degeneration limits", c5_degenerations),
        ("orbit-dimension gap", c6_orbit_gap),
        ("identity suite", c7_identities),
        ("classification round-trip", c8_round_trip),
        ("orbit soundness", c9_orbit_soundness),
        ("invariance of delta and Delta", c10_invariance),
        ("non-singular derivation", c11_nonsingular),
    ];
    let mut failed = Vec::new();
    for (k, (name, f)) in criteria.iter().enumerate() {
        let res = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or(p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default())
        });
        match res {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", k + 1),
            Err(why) => {
                println!("criterion {:>2} FAIL  {name}: {why}", k + 1);
                failed.push(k + 1);
            }
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
