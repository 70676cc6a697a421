use prorigid::chevalley::{fixed_lines, ParabolicSpec, RootSubset, WeylRep};
use prorigid::matgroup::sl_order_modulus;
use prorigid::methods::MethodParams;
use prorigid::oracle::{crt_bijective, enumerate_sl_order, sl2z_image_order, square_roots_above};
use prorigid::ring_arith::{hensel_lift_sqrt, splitting_type, Splitting};
use prorigid::Fault;
use serde::Serialize;

use crate::commands::{check_samples, witness_bundle};
use crate::output::{emit, InputError, Outcome, SELFTEST_SCHEMA};
use crate::SelftestArgs;

#[derive(Serialize)]
struct Check {
    name: &'static str,
    passed: bool,
    detail: String,
}

#[derive(Serialize)]
struct SelftestConfig {
    command: &'static str,
    samples: usize,
    seed: u64,
    inject_fault: Option<Fault>,
}

#[derive(Serialize)]
struct SelftestDoc {
    schema_version: &'static str,
    config: SelftestConfig,
    status: &'static str,
    first_failure: Option<&'static str>,
    checks: Vec<Check>,
}

fn sl2_enumeration() -> (bool, String) {
    let mut parts = Vec::new();
    let mut ok = true;
    for m in [5u64, 7, 4, 6, 3, 2] {
        let counted = enumerate_sl_order(2, m);
        ok &= sl_order_modulus(2, m) == counted.into();
        parts.push(format!("{m}:{counted}"));
    }
    (ok, parts.join(" "))
}

fn sl2z_surjection() -> (bool, String) {
    let ok = (3..=7u64).all(|m| sl_order_modulus(2, m) == (sl2z_image_order(m) as u64).into());
    (ok, "moduli 3..=7".into())
}

fn crt() -> (bool, String) {
    let bad: Vec<u64> = (2..=1000u64).filter(|&m| !crt_bijective(m)).collect();
    (bad.is_empty(), format!("moduli 2..=1000, {} failures", bad.len()))
}

fn hensel() -> (bool, String) {
    let mut ok = true;
    for p in [7u64, 17, 23] {
        let Ok(Splitting::Split { roots: (r, _) }) = splitting_type(p, 2) else {
            return (false, format!("2 is not a square mod {p}"));
        };
        for e in 1..=4 {
            let Ok(x) = hensel_lift_sqrt(2, p, r, e) else {
                return (false, format!("lift failed at {p}^{e}"));
            };
            ok &= square_roots_above(2, p, r, e) == vec![x];
        }
    }
    (ok, "d=2, p in {7,17,23}, e<=4".into())
}

fn fixed_line_baselines() -> (bool, String) {
    let p1 = RootSubset::from_blocks(&[1, 3]).expect("valid blocks");
    let p2 = p1.dynkin_image();
    let mut parts = Vec::new();
    let mut ok = true;
    for p in [5u64, 7] {
        let count = |t: &RootSubset| ParabolicSpec::new(p, t.clone()).and_then(|s| fixed_lines(&s)).ok();
        let (a, b) = (count(&p1), count(&p2));
        ok &= a == Some(1) && b == Some(0);
        parts.push(format!("{p}:{a:?}/{b:?}"));
    }
    (ok, parts.join(" "))
}

fn weyl_determinant(fault: Option<Fault>) -> (bool, String) {
    let w = match fault {
        Some(Fault::W0Sign) => WeylRep::sign_corrupted(4),
        _ => WeylRep::canonical(4),
    };
    let dets: Vec<u64> = [5u64, 7].iter().map(|&m| w.det(m)).collect();
    (dets.iter().all(|&d| d == 1), format!("det w0 mod 5, 7 = {dets:?}"))
}

fn preset(params: MethodParams, samples: usize, seed: u64, fault: Option<Fault>) -> (bool, String) {
    let applicable = match (fault, &params) {
        (Some(Fault::PlaceSwap), MethodParams::MethodA { .. } | MethodParams::S16 { .. }) => fault,
        (Some(Fault::W0Sign), MethodParams::MethodB { .. }) => fault,
        _ => None,
    };
    match witness_bundle(&params, samples, seed, applicable) {
        Ok((bundle, report)) => (
            report.witnessed() && bundle.obstruction.holds,
            format!(
                "{:?}: hom {}, membership {}, inverse {}, certificate {}",
                report.verdict,
                report.homomorphism_failures,
                report.membership_failures,
                report.inverse_failures,
                bundle.obstruction.holds
            ),
        ),
        Err(e) => (false, e.to_string()),
    }
}

type Step = Box<dyn Fn() -> (bool, String)>;

pub fn run(args: &SelftestArgs) -> Result<Outcome, InputError> {
    check_samples(args.samples)?;
    let fault = args.inject_fault.map(Fault::from);
    let (samples, seed) = (args.samples, args.seed);
    let steps: Vec<(&'static str, Step)> = vec![
        ("sl2-enumeration", Box::new(sl2_enumeration)),
        ("sl2z-surjection", Box::new(sl2z_surjection)),
        ("crt-bijection", Box::new(crt)),
        ("hensel-lifts", Box::new(hensel)),
        ("fixed-line-baselines", Box::new(fixed_line_baselines)),
        ("graph-automorphism-determinant", Box::new(move || weyl_determinant(fault))),
        (
            "preset-method-a",
            Box::new(move || {
                preset(MethodParams::MethodA { n: 4, p: 5, q: 7, order: 2, level: 2 }, samples, seed, fault)
            }),
        ),
        ("preset-method-b", Box::new(move || preset(MethodParams::MethodB { p: 5, q: 7 }, samples, seed, fault))),
        (
            "preset-method-c",
            Box::new(move || preset(MethodParams::MethodC { d: 2, p: 7, q: 17 }, samples, seed, fault)),
        ),
        ("preset-s16", Box::new(move || preset(MethodParams::S16 { p: 7 }, samples, seed, fault))),
    ];
    let mut checks = Vec::new();
    for (name, step) in steps {
        let (passed, detail) = step();
        eprintln!("{} {name}: {detail}", if passed { "ok  " } else { "FAIL" });
        checks.push(Check { name, passed, detail });
    }
    let first_failure = checks.iter().find(|c| !c.passed).map(|c| c.name);
    let outcome = Outcome::from_bool(first_failure.is_none());
    let doc = SelftestDoc {
        schema_version: SELFTEST_SCHEMA,
        config: SelftestConfig { command: "selftest", samples, seed, inject_fault: fault },
        status: if first_failure.is_none() { "passed" } else { "failed" },
        first_failure,
        checks,
    };
    emit(&doc, args.output.as_deref())?;
    if let Some(name) = first_failure {
        eprintln!("selftest failed: {name}");
    }
    Ok(outcome)
}
