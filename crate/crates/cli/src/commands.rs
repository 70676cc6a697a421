use std::collections::BTreeSet;

use prorigid::methods::{self, MethodParams, ObstructionReport};
use prorigid::ring_arith::find_split_primes;
use prorigid::{obstruction_report, verify_iso, Fault, IsoReport, WitnessBundle};
use serde::Serialize;

use crate::output::{
    emit, read_json, InputError, Outcome, OBSTRUCT_SCHEMA, PRIMES_SCHEMA, VERIFY_SCHEMA, WITNESS_SCHEMA,
};
use crate::{BundleArgs, RunOpts, SearchArgs};

#[derive(Serialize)]
struct WitnessConfig<'a> {
    command: &'static str,
    params: &'a MethodParams,
    samples: usize,
    seed: u64,
    inject_fault: Option<Fault>,
}

#[derive(Serialize)]
struct WitnessDoc<'a> {
    schema_version: &'static str,
    config: WitnessConfig<'a>,
    status: &'static str,
    bundle: &'a WitnessBundle,
    iso_report: &'a IsoReport,
}

pub fn check_samples(samples: usize) -> Result<(), InputError> {
    if samples == 0 {
        return Err(InputError("--samples must be at least 1".into()));
    }
    Ok(())
}

/// Builds, optionally breaks, and verifies a preset bundle.
pub fn witness_bundle(
    params: &MethodParams,
    samples: usize,
    seed: u64,
    fault: Option<Fault>,
) -> Result<(WitnessBundle, IsoReport), InputError> {
    check_samples(samples)?;
    let mut bundle = methods::build(params)?;
    if let Some(f) = fault {
        bundle.inject_fault(f)?;
    }
    let report = verify_iso(&bundle.iso()?, samples, seed);
    Ok((bundle, report))
}

pub fn witness(params: MethodParams, run: &RunOpts) -> Result<Outcome, InputError> {
    let fault = run.inject_fault.map(Fault::from);
    let (bundle, report) = witness_bundle(&params, run.samples, run.seed, fault)?;
    let outcome = Outcome::from_bool(report.witnessed() && bundle.obstruction.holds);
    let doc = WitnessDoc {
        schema_version: WITNESS_SCHEMA,
        config: WitnessConfig {
            command: "witness",
            params: &params,
            samples: run.samples,
            seed: run.seed,
            inject_fault: fault,
        },
        status: outcome.status(),
        bundle: &bundle,
        iso_report: &report,
    };
    emit(&doc, run.output.as_deref())?;
    eprintln!(
        "{}: {} (hom {}, membership {}, inverse {} failures; certificate {})",
        params.name(),
        outcome.status(),
        report.homomorphism_failures,
        report.membership_failures,
        report.inverse_failures,
        if bundle.obstruction.holds { "holds" } else { "fails" }
    );
    Ok(outcome)
}

#[derive(Serialize)]
struct SearchConfig {
    command: &'static str,
    d: i64,
    count: usize,
    exclude: Vec<u64>,
    congruence: Option<(u64, u64)>,
}

#[derive(Serialize)]
struct PrimesDoc {
    schema_version: &'static str,
    config: SearchConfig,
    primes: Vec<u64>,
}

fn parse_congruence(text: &str) -> Result<(u64, u64), InputError> {
    let bad = || InputError(format!("congruence must look like m:a with integers, got {text:?}"));
    let (m, a) = text.split_once(':').ok_or_else(bad)?;
    let m: u64 = m.trim().parse().map_err(|_| bad())?;
    let a: u64 = a.trim().parse().map_err(|_| bad())?;
    Ok((m, a))
}

pub fn search_primes(args: &SearchArgs) -> Result<Outcome, InputError> {
    let congruence = match (&args.congruence, args.full_center) {
        (Some(c), _) => Some(parse_congruence(c)?),
        (None, Some(n)) => Some((n, 1)),
        (None, None) => None,
    };
    let exclude: BTreeSet<u64> = args.exclude.iter().copied().collect();
    let primes = find_split_primes(args.d, args.count, &exclude, congruence)?;
    let doc = PrimesDoc {
        schema_version: PRIMES_SCHEMA,
        config: SearchConfig {
            command: "search-primes",
            d: args.d,
            count: args.count,
            exclude: exclude.into_iter().collect(),
            congruence,
        },
        primes,
    };
    emit(&doc, args.output.as_deref())?;
    Ok(Outcome::Pass)
}

/// Accepts a witness document or a bare bundle.
fn load_bundle(args: &BundleArgs) -> Result<WitnessBundle, InputError> {
    let mut value = read_json(&args.bundle)?;
    if let Some(inner) = value.get_mut("bundle") {
        value = inner.take();
    }
    serde_json::from_value(value)
        .map_err(|e| InputError(format!("{} is not a witness bundle: {e}", args.bundle.display())))
}

#[derive(Serialize)]
struct BundleConfig {
    command: &'static str,
    bundle: String,
    samples: usize,
    seed: u64,
}

#[derive(Serialize)]
struct VerifyDoc<'a> {
    schema_version: &'static str,
    config: BundleConfig,
    status: &'static str,
    params: &'a MethodParams,
    iso_report: &'a IsoReport,
}

pub fn verify_bundle(args: &BundleArgs) -> Result<Outcome, InputError> {
    check_samples(args.samples)?;
    let bundle = load_bundle(args)?;
    let report = verify_iso(&bundle.iso()?, args.samples, args.seed);
    let outcome = Outcome::from_bool(report.witnessed());
    let doc = VerifyDoc {
        schema_version: VERIFY_SCHEMA,
        config: BundleConfig {
            command: "verify-iso",
            bundle: args.bundle.display().to_string(),
            samples: args.samples,
            seed: args.seed,
        },
        status: outcome.status(),
        params: &bundle.params,
        iso_report: &report,
    };
    emit(&doc, args.output.as_deref())?;
    Ok(outcome)
}

#[derive(Serialize)]
struct ObstructDoc<'a> {
    schema_version: &'static str,
    config: BundleConfig,
    status: &'static str,
    params: &'a MethodParams,
    matches_stored: bool,
    obstruction: &'a ObstructionReport,
}

pub fn obstruct(args: &BundleArgs) -> Result<Outcome, InputError> {
    let bundle = load_bundle(args)?;
    let fresh = obstruction_report(&bundle)?;
    let matches_stored = fresh == bundle.obstruction;
    let outcome = Outcome::from_bool(fresh.holds && matches_stored);
    let doc = ObstructDoc {
        schema_version: OBSTRUCT_SCHEMA,
        config: BundleConfig {
            command: "obstruct",
            bundle: args.bundle.display().to_string(),
            samples: args.samples,
            seed: args.seed,
        },
        status: outcome.status(),
        params: &bundle.params,
        matches_stored,
        obstruction: &fresh,
    };
    emit(&doc, args.output.as_deref())?;
    Ok(outcome)
}
