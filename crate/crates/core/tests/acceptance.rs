//! One line per acceptance criterion; exits nonzero if any fails.

mod common;

use std::path::PathBuf;
use std::process::Command;

use common::*;
use mbkit::catalog::{self, models};
use mbkit::counting::{cross_check_negation, lefschetz_relative_polynomial, verify_corollary, verify_main};
use mbkit::descriptor::{HomologySource, MorseBottDescriptor};
use mbkit::flow::{
    audit_d_squared, audit_sign_transport, build_complex, homology_vs_reference, kernel_rank_inequality,
    reconstruction_holds,
};
use mbkit::homology::{
    boundary_matrices, homology_profile, poincare_duality_check, poincare_polynomial, relative_poincare_polynomial,
    smith_normal_form, IntegerMatrix, SignCocycle,
};
use mbkit::morsify::{check_counting_identity, verify_main_via_morsification};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, &'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ac1() -> Outcome {
    let entries = catalog::entries();
    for e in &entries {
        let r = verify_main(&e.descriptor).map_err(|x| x.to_string())?;
        ensure(r.verdict.is_pass() && r.quotient == e.expected_r_main.value, || {
            format!(
                "{}: R = {} (expected {})",
                e.descriptor.name, r.quotient, e.expected_r_main.value
            )
        })?;
    }
    let r = |n: &str| verify_main(&catalog::get(n).unwrap().descriptor).unwrap().quotient;
    ensure(r("disk_max") == poly(&[0, 1]), || "disk_max R != t".into())?;
    ensure(r("solid_torus_core_max") == poly(&[0, 1, 1]), || {
        "solid torus R != t+t^2".into()
    })?;
    Ok(format!("{} entries, R exact", entries.len()))
}

fn ac2() -> Outcome {
    let mut n = 0;
    for e in catalog::entries()
        .into_iter()
        .filter(|e| e.descriptor.is_fully_oriented())
    {
        let name = &e.descriptor.name;
        let want = e
            .expected_r_corollary
            .as_ref()
            .ok_or(format!("{name}: no expected corollary R"))?;
        let r = verify_corollary(&e.descriptor).map_err(|x| x.to_string())?;
        ensure(r.verdict.is_pass() && r.quotient == want.value, || {
            format!("{name}: corollary R = {} (expected {})", r.quotient, want.value)
        })?;
        ensure(cross_check_negation(&e.descriptor).map_err(|x| x.to_string())?, || {
            format!("{name}: negation cross-check fails")
        })?;
        if let HomologySource::CellModel(m) = &e.descriptor.manifold_homology {
            let lefschetz = lefschetz_relative_polynomial(&e.descriptor).map_err(|x| x.to_string())?;
            let direct = relative_poincare_polynomial(m).map_err(|x| x.to_string())?;
            ensure(lefschetz == direct, || {
                format!("{name}: Lefschetz {lefschetz} vs relative SNF {direct}")
            })?;
        }
        n += 1;
    }
    let disk_min = verify_corollary(&catalog::get("disk_min").unwrap().descriptor).unwrap();
    ensure(disk_min.quotient == poly(&[1]), || "disk_min corollary R != 1".into())?;
    Ok(format!("{n} oriented entries, cross-check and Lefschetz agree"))
}

fn ac3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0003);
    for i in 0..1000 {
        let m = random_matrix(&mut rng);
        let got: Vec<i128> = smith_normal_form(&IntegerMatrix::from_rows(&m))
            .elementary_divisors
            .iter()
            .map(|d| i128::try_from(d).unwrap())
            .collect();
        let want = minors_oracle(&m);
        ensure(got == want, || {
            format!("matrix #{i} {m:?}: SNF {got:?}, minors {want:?}")
        })?;
    }
    let mut twisted = 0;
    for i in 0..200 {
        let model = random_complex(&mut rng);
        let twist = random_cocycle(&model, &mut rng);
        twisted += usize::from(!twist.is_trivial());
        let c = boundary_matrices(&model, Some(&twist)).map_err(|x| x.to_string())?;
        ensure(c.d_squared_defects().is_empty(), || {
            format!("complex #{i}: twisted d^2 != 0")
        })?;
    }
    let circle = models::circle();
    let h = homology_profile(&circle, Some(&SignCocycle::new([(0, 1, -1)]).unwrap())).unwrap();
    ensure(h.poincare_polynomial().is_zero(), || {
        "twisted circle has free homology".into()
    })?;
    ensure(h.to_string() == "0, torsion: [2] in degree 0", || {
        format!("twisted circle: {h}")
    })?;
    Ok(format!(
        "1000 matrices match minors; 200 complexes ({twisted} nontrivially twisted) close; P(S^1;-1) = 0 with Z/2"
    ))
}

fn ac4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0004);
    for i in 0..500 {
        let d = random_descriptor(&mut rng);
        let choices = random_choices(&d, &mut rng);
        ensure(
            check_counting_identity(&d, &choices).map_err(|x| x.to_string())?,
            || format!("random pair #{i}: counting identity fails"),
        )?;
    }
    for e in catalog::entries() {
        let name = &e.descriptor.name;
        let m = verify_main_via_morsification(&e.descriptor, &e.choices).map_err(|x| x.to_string())?;
        let direct = verify_main(&e.descriptor).unwrap().quotient;
        let top = e.descriptor.ambient_dim;
        for k in 0..=top {
            let correction: num_bigint::BigInt = m
                .blocks
                .iter()
                .filter(|b| b.shift <= k)
                .map(|b| b.quotient.coeff(k - b.shift))
                .sum();
            ensure(m.h_report.quotient.coeff(k) - correction == direct.coeff(k), || {
                format!("{name}: reconstruction fails at t^{k}")
            })?;
        }
        ensure(m.verdict.is_pass() && m.agrees_with_direct, || {
            format!("{name}: morsification verdict fails")
        })?;
    }
    for f in catalog::all_flows().into_iter().filter(|f| f.should_pass) {
        let cc = build_complex(&f.dataset).map_err(|x| x.to_string())?;
        ensure(reconstruction_holds(&cc), || {
            format!("{}: rank reconstruction fails", f.name)
        })?;
    }
    Ok("500 random pairs; catalog R_h decomposition matches degree by degree".into())
}

fn ac5() -> Outcome {
    let flows = catalog::all_flows();
    let required = [
        "sphere_height",
        "sphere_four_point",
        "circle_twisted",
        "flat_torus_blocks",
    ];
    for name in required {
        let f = flows
            .iter()
            .find(|f| f.name == name)
            .ok_or(format!("missing fixture {name}"))?;
        let cc = build_complex(&f.dataset).map_err(|x| x.to_string())?;
        ensure(audit_d_squared(&cc).holds, || format!("{name}: d^2 != 0"))?;
        ensure(homology_vs_reference(&cc, &f.expected_homology).unwrap(), || {
            format!("{name}: homology")
        })?;
        let restricted = f.restricted.as_ref().ok_or(format!("{name}: no restricted data"))?;
        let st = audit_sign_transport(&f.dataset, restricted).map_err(|x| x.to_string())?;
        ensure(st.holds, || format!("{name}: sign/transport {:?}", st.mismatches))?;
        let k = kernel_rank_inequality(&f.dataset).map_err(|x| x.to_string())?;
        ensure(k.holds, || format!("{name}: kernel ranks {:?} < {:?}", k.lhs, k.rhs))?;
    }
    let bad = flows
        .iter()
        .find(|f| f.name == "sphere_four_point_corrupted")
        .ok_or("missing corrupted fixture")?;
    let audit = audit_d_squared(&build_complex(&bad.dataset).unwrap());
    let first = audit.defects.first().ok_or("corrupted fixture passes d^2")?;
    ensure((first.source.as_str(), first.target.as_str()) == ("a", "q"), || {
        format!("corrupted fixture flagged at {first}")
    })?;
    Ok(format!(
        "4 datasets pass all audits; corrupted fixture rejected with {first}"
    ))
}

fn ac6() -> Outcome {
    for (name, model, dim) in [
        ("S^1", models::circle(), 1),
        ("T^2", models::torus(), 2),
        ("S^2", models::sphere(), 2),
    ] {
        ensure(poincare_duality_check(&model, dim).unwrap(), || {
            format!("{name} fails duality")
        })?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0006);
    for i in 0..1000 {
        let p = random_poly(&mut rng, 8, -50, 50);
        let cap = p.degree().unwrap_or(0) + (i % 3);
        let back = p.reverse(cap).and_then(|r| r.reverse(cap)).map_err(|x| x.to_string())?;
        ensure(back == p, || format!("reverse not an involution on {p}"))?;
    }
    let mut n = 0;
    for e in catalog::entries()
        .into_iter()
        .filter(|e| e.descriptor.is_fully_oriented())
    {
        let twice = e
            .descriptor
            .negate()
            .and_then(|d| d.negate())
            .map_err(|x| x.to_string())?;
        ensure(twice == e.descriptor, || {
            format!("{}: negate twice differs", e.descriptor.name)
        })?;
        n += 1;
    }
    Ok(format!(
        "S^1, T^2, S^2 palindromic; 1000 reversals; negate involutive on {n} entries"
    ))
}

fn adversarial() -> MorseBottDescriptor {
    let text = std::fs::read_to_string(fixtures().join("adversarial.json")).unwrap();
    MorseBottDescriptor::from_json(&text).unwrap()
}

fn ac7() -> Outcome {
    let d = adversarial();
    ensure(
        poincare_polynomial(&models::disk(), None).unwrap() == poly(&[1]),
        || "disk model".into(),
    )?;
    let r = verify_main(&d).map_err(|x| x.to_string())?;
    let detail = r.failure_detail.clone().unwrap_or_default();
    ensure(!r.verdict.is_pass() && detail.contains("division inexact"), || {
        format!("adversarial verdict {} ({detail})", r.verdict)
    })?;
    Ok(format!("lhs {} rejected: {detail}", r.lhs))
}

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

fn ac8() -> Outcome {
    for e in catalog::entries() {
        let once = e.descriptor.to_json_pretty();
        let back = MorseBottDescriptor::from_json(&once).map_err(|x| x.to_string())?;
        ensure(back == e.descriptor && back.to_json_pretty() == once, || {
            format!("{} does not round-trip", e.descriptor.name)
        })?;
    }
    let cases = [
        ("disk_max.json", 0, "pass"),
        ("bad_index.json", 2, "index exceeds m − dim"),
        ("adversarial.json", 1, "division inexact"),
    ];
    for (file, code, needle) in cases {
        let out = Command::new(env!("CARGO_BIN_EXE_mbkit"))
            .arg("verify")
            .arg(fixtures().join(file))
            .output()
            .map_err(|x| x.to_string())?;
        let text = format!(
            "{}{}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        );
        ensure(out.status.code() == Some(code) && text.contains(needle), || {
            format!("verify {file}: exit {:?}, output {text}", out.status.code())
        })?;
    }
    Ok("catalog JSON round-trips byte-identically; verify exits 0/2/1 as documented".into())
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("AC1", "main-theorem suite", ac1),
        ("AC2", "corollary suite", ac2),
        ("AC3", "twisted-homology oracle", ac3),
        ("AC4", "morsification suite", ac4),
        ("AC5", "flow-complex suite", ac5),
        ("AC6", "duality suite", ac6),
        ("AC7", "negative control", ac7),
        ("AC8", "interface suite", ac8),
    ];
    let mut failed = 0;
    for (id, label, check) in criteria {
        match std::panic::catch_unwind(check) {
            Ok(Ok(detail)) => println!("{id} PASS {label}: {detail}"),
            Ok(Err(why)) => {
                failed += 1;
                println!("{id} FAIL {label}: {why}");
            }
            Err(_) => {
                failed += 1;
                println!("{id} FAIL {label}: panicked");
            }
        }
    }
    println!("{} of 8 criteria pass (exact integer equality)", 8 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
