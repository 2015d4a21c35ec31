//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

#[path = "../../core/tests/common/oracles.rs"]
mod oracles;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use fuglede_cli::{run_args, EXIT_PASS};
use fuglede_core::counterexample::verify_counterexample;
use fuglede_core::exhaustive::{
    audit_size_restrictions, canonical_plane_demo, orbit_consistency, prove_fuglede, random_subspace_tiling,
    ProveOptions,
};
use fuglede_core::index::ElementIndex;
use fuglede_core::residue::nonsquares;
use fuglede_core::spectral::{find_spectrum, is_spectrum};
use fuglede_core::tiling::{find_tiling_partner, is_tiling_pair};
use fuglede_core::{GroupParams, PointSet, SearchLimits};
use oracles::{SmallGroup, SMALL_GROUPS};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

fn cli(args: &[&str]) -> (i32, Value) {
    let out = run_args(std::iter::once("fuglede").chain(args.iter().copied()));
    let json = serde_json::from_str(&out.stdout).unwrap_or(Value::Null);
    (out.code, json)
}

fn params(p: u32, d: usize) -> GroupParams {
    GroupParams::new(p, d).expect("valid group")
}

fn step_passes(report: &Value, name: &str) -> bool {
    report["details"]["steps"]
        .as_array()
        .and_then(|steps| steps.iter().find(|s| s["step"] == name))
        .is_some_and(|s| s["pass"] == true && s["checked"].as_u64().unwrap_or(0) > 0)
}

fn counterexample_family() -> Verdict {
    let mut failures = Vec::new();
    for p in [3u32, 5, 7, 11, 13, 101] {
        let start = Instant::now();
        let (code, report) = cli(&["counterexample", "--p", &p.to_string()]);
        let elapsed = start.elapsed();
        let budget = if p <= 13 { Duration::from_secs(1) } else { Duration::from_secs(30) };
        let tuples = 2 * u64::from(p).pow(3);
        let ok = code == EXIT_PASS
            && report["pass"] == true
            && step_passes(&report, "is_spectrum")
            && step_passes(&report, "counting_vectors_all_two")
            && step_passes(&report, "discriminant_identity")
            && step_passes(&report, "non_tiling_size_obstruction")
            && report["details"]["discriminant"]["tuples_checked"] == tuples
            && elapsed <= budget;
        if !ok {
            failures.push(format!("p={p} ({elapsed:.2?})"));
        }
    }
    verdict(failures.is_empty(), format!("p in {{3,5,7,11,13,101}}; failures {failures:?}"))
}

fn minus_one() -> Verdict {
    let mut failures = Vec::new();
    for p in [3u32, 7, 11] {
        let (code, report) = cli(&["counterexample", "--p", &p.to_string(), "--n", &(p - 1).to_string()]);
        if code != EXIT_PASS || report["pass"] != true || report["details"]["n"] != p - 1 {
            failures.push(p);
        }
    }
    verdict(failures.is_empty(), format!("n = p-1 for p in {{3,7,11}}; failures {failures:?}"))
}

fn all_nonsquares() -> Verdict {
    let mut checked = 0;
    let mut failures = Vec::new();
    for p in [3u32, 5, 7, 11, 13] {
        for n in nonsquares(p).expect("odd prime") {
            checked += 1;
            match verify_counterexample(p, Some(n)) {
                Ok(r) if r.pass => {}
                _ => failures.push((p, n)),
            }
        }
    }
    verdict(failures.is_empty(), format!("{checked} (p, n) pairs; failures {failures:?}"))
}

fn z2_fourth() -> Verdict {
    let one_start = Instant::now();
    let one = run_args(["fuglede", "prove", "--p", "2", "--d", "4", "--workers", "1"]);
    let one_time = one_start.elapsed();
    let eight_start = Instant::now();
    let eight = run_args(["fuglede", "prove", "--p", "2", "--d", "4", "--workers", "8"]);
    let eight_time = eight_start.elapsed();
    let report: Value = serde_json::from_str(&one.stdout).unwrap_or(Value::Null);
    let discrepancies = report["details"]["discrepancies"].as_array().map(Vec::len);
    let ok = one.code == EXIT_PASS
        && report["details"]["total_subsets"] == 65536
        && discrepancies == Some(0)
        && one == eight
        && one_time <= Duration::from_secs(300)
        && eight_time <= Duration::from_secs(60);
    verdict(
        ok,
        format!(
            "65536 subsets, discrepancies {discrepancies:?}, reports identical for 1 and 8 workers: {} ({one_time:.2?} / {eight_time:.2?})",
            one == eight
        ),
    )
}

fn small_ladder() -> Verdict {
    let ladder = [(2u32, 1usize), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1), (7, 1), (11, 1), (13, 1)];
    let mut failures = Vec::new();
    for (p, d) in ladder {
        let start = Instant::now();
        let (code, report) = cli(&["prove", "--p", &p.to_string(), "--d", &d.to_string()]);
        let ok = code == EXIT_PASS
            && report["details"]["discrepancies"].as_array().is_some_and(Vec::is_empty)
            && report["details"]["total_subsets"] == 1u64 << u64::from(p).pow(d as u32)
            && start.elapsed() <= Duration::from_secs(10);
        if !ok {
            failures.push((p, d));
        }
    }
    verdict(failures.is_empty(), format!("{} groups; failures {failures:?}", ladder.len()))
}

fn size_audit() -> Verdict {
    let mut details = Vec::new();
    let mut pass = true;
    let rules: [(u32, usize, fn(usize) -> bool); 2] = [
        (2, 4, |s| s == 1 || s == 2 || s % 4 == 0),
        (3, 2, |s| s == 1 || s == 3 || s == 9),
    ];
    for (p, d, allowed) in rules {
        let report = match prove_fuglede(params(p, d), ProveOptions::default()) {
            Ok(r) => r,
            Err(e) => return verdict(false, format!("({p},{d}): {e}")),
        };
        let audit = audit_size_restrictions(&report);
        let sizes_ok = audit.spectral_sizes.iter().all(|&s| allowed(s));
        let records_ok = report.records.iter().filter(|r| r.spectral).all(|r| allowed(r.size));
        pass &= audit.pass && sizes_ok && records_ok;
        details.push(format!("({p},{d}) spectral sizes {:?}", audit.spectral_sizes));
    }
    verdict(pass, details.join("; "))
}

fn subspace_duals() -> Verdict {
    let limits = SearchLimits::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut failures = 0;
    let mut checked = 0;
    for (p, d) in [(2u32, 4usize), (3, 2)] {
        let g = params(p, d);
        let index = ElementIndex::new(g, limits.max_group_order).expect("small group");
        for _ in 0..100 {
            checked += 1;
            let ok = random_subspace_tiling(&index, &limits, &mut rng).is_ok_and(|(set, w)| {
                let partner = w.elements(limits.max_group_order).expect("small subspace");
                let dual = w.perp().elements(limits.max_group_order).expect("small subspace");
                is_tiling_pair(&set, &partner).unwrap_or(false) && is_spectrum(&dual, &set).unwrap_or(false)
            });
            if !ok {
                failures += 1;
            }
        }
    }
    verdict(failures == 0, format!("{checked} seeded subspace tilings, {failures} failures"))
}

fn orbit_invariance() -> Verdict {
    let limits = SearchLimits::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut details = Vec::new();
    let mut pass = true;
    for (p, d) in [(2u32, 4usize), (3, 2)] {
        match orbit_consistency(params(p, d), 200, &limits, &mut rng) {
            Ok(r) => {
                pass &= r.pass && r.samples == 200;
                details.push(format!("({p},{d}) {} samples, {} mismatches", r.samples, r.mismatches.len()));
            }
            Err(e) => {
                pass = false;
                details.push(format!("({p},{d}) {e}"));
            }
        }
    }
    verdict(pass, details.join("; "))
}

fn oracle_equivalence() -> Verdict {
    let limits = SearchLimits::default();
    let mut subsets = 0u64;
    let mut disagreements = Vec::new();
    for (p, d) in SMALL_GROUPS {
        let oracle = SmallGroup::new(p, d);
        let g = params(p, d);
        let index = ElementIndex::new(g, 16).expect("small group");
        for mask in 1u32..1 << oracle.n {
            subsets += 1;
            let members: Vec<usize> = (0..oracle.n).filter(|&k| mask >> k & 1 == 1).collect();
            let set: PointSet = index.to_point_set(&members);
            let spectral = find_spectrum(&set, &limits).ok().flatten().is_some();
            let tiling = find_tiling_partner(&set, &limits).ok().flatten().is_some();
            if spectral != oracle.spectral(mask) || tiling != oracle.tiles(mask) {
                disagreements.push((p, d, mask));
            }
        }
    }
    verdict(
        disagreements.is_empty(),
        format!("{} groups, {subsets} subsets; disagreements {disagreements:?}", SMALL_GROUPS.len()),
    )
}

fn canonical_demo() -> Verdict {
    let g = params(2, 4);
    let partner = PointSet::from_rows(g, &[&[0, 0, 0, 0], &[0, 0, 0, 1], &[1, 1, 1, 0], &[1, 1, 1, 1]]).expect("rows");
    match canonical_plane_demo() {
        Ok(demo) => {
            let case = demo.cases.iter().find(|c| c.name == "non_planar");
            let ok = demo.pass
                && case.is_some_and(|c| c.partner == partner && c.tiles && c.partner_is_subspace && c.dual_is_spectrum);
            verdict(ok, "partner {0000,0001,1110,1111} is a verified subspace tiling partner")
        }
        Err(e) => verdict(false, e.to_string()),
    }
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Verdict); 10] = [
        ("counterexample family", counterexample_family),
        ("n = -1 specialization", minus_one),
        ("all non-squares", all_nonsquares),
        ("(Z/2Z)^4 exhaustive", z2_fourth),
        ("small-case ladder", small_ladder),
        ("size restrictions", size_audit),
        ("subspace partner duals", subspace_duals),
        ("change-of-basis invariance", orbit_invariance),
        ("oracle equivalence", oracle_equivalence),
        ("canonical demo", canonical_demo),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let v = check();
        if !v.pass {
            failed += 1;
        }
        println!(
            "criterion {:>2}: {} {name}: {} [{:.2?}]",
            k + 1,
            if v.pass { "PASS" } else { "FAIL" },
            v.detail,
            start.elapsed()
        );
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
