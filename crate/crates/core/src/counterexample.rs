//! A spectral set of size 2p in (Z/pZ)^4 that cannot tile, for every odd
//! prime p, together with a step-by-step mechanical check of why.
//!
//! With n a non-square mod p:
//!
//! ```text
//! E = { (t^2, t, t, 1) } u { (n t^2, n t, t, n) }        t in Z/pZ
//! A = { (1, 2i, 0, i^2) } u { (0, 0, -2n i, n i^2) }     i in Z/pZ
//! ```
//!
//! Every difference of two elements of A meets each level set
//! `<a - b, e> = c` in exactly two points of E, so the counting vectors are
//! constant and A is a spectrum. Since 2p does not divide p^4, E cannot tile.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{GroupParams, GroupVector, PointSet};
use crate::residue::{self, add, mul, neg, sub};
use crate::spectral::is_spectrum;
use crate::tiling::tiling_partner_search;
use crate::SearchLimits;

const MAX_WITNESSES: usize = 10;

fn validate(p: u32, n: u32) -> Result<GroupParams> {
    if p == 2 {
        return Err(Error::Unsupported(
            "the construction needs an odd prime".into(),
        ));
    }
    let params = GroupParams::new(p, 4)?;
    if residue::is_square(n, p)? {
        return Err(Error::Parameter(format!("{n} is a square mod {p}")));
    }
    Ok(params)
}

fn e_point(params: GroupParams, branch: usize, t: u32, n: u32) -> GroupVector {
    let p = params.p();
    let t2 = mul(t, t, p);
    let coords = match branch {
        0 => vec![t2, t, t, 1],
        _ => vec![mul(n, t2, p), mul(n, t, p), t, n % p],
    };
    GroupVector::from_reduced(params, coords)
}

fn a_point(params: GroupParams, branch: usize, i: u32, n: u32) -> GroupVector {
    let p = params.p();
    let i2 = mul(i, i, p);
    let coords = match branch {
        0 => vec![1, mul(2, i, p), 0, i2],
        _ => vec![0, 0, neg(mul(mul(2, n, p), i, p), p), mul(n, i2, p)],
    };
    GroupVector::from_reduced(params, coords)
}

/// `{ (t^2, t, t, 1) } u { (n t^2, n t, t, n) }`.
pub fn construct_e(p: u32, n: u32) -> Result<PointSet> {
    let params = validate(p, n)?;
    let n = n % p;
    PointSet::from_distinct(
        params,
        (0..2).flat_map(|b| (0..p).map(move |t| e_point(params, b, t, n))),
    )
}

/// `{ (1, 2i, 0, i^2) } u { (0, 0, -2n i, n i^2) }`.
pub fn construct_a(p: u32, n: u32) -> Result<PointSet> {
    let params = validate(p, n)?;
    let n = n % p;
    PointSet::from_distinct(
        params,
        (0..2).flat_map(|b| (0..p).map(move |i| a_point(params, b, i, n))),
    )
}

/// The construction for one (p, n), keeping each point's branch and parameter.
#[derive(Clone, Debug)]
pub struct CounterexampleInstance {
    pub p: u32,
    pub n: u32,
    pub e: PointSet,
    pub a: PointSet,
    /// `a_points[branch][i]`
    a_points: [Vec<GroupVector>; 2],
}

impl CounterexampleInstance {
    /// Builds the instance; `n` defaults to the smallest non-square mod p.
    pub fn new(p: u32, n: Option<u32>) -> Result<Self> {
        if p == 2 {
            return Err(Error::Unsupported(
                "the construction needs an odd prime".into(),
            ));
        }
        let n = match n {
            Some(n) => n % p,
            None => residue::smallest_nonsquare(p)?,
        };
        let params = validate(p, n)?;
        let a_points = [0, 1].map(|b| (0..p).map(|i| a_point(params, b, i, n)).collect());
        Ok(CounterexampleInstance {
            p,
            n,
            e: construct_e(p, n)?,
            a: construct_a(p, n)?,
            a_points,
        })
    }

    pub fn params(&self) -> GroupParams {
        self.e.params()
    }

    /// Elements of A with their (branch, i) labels, branch-major.
    pub fn labelled_a(&self) -> impl Iterator<Item = (usize, u32, &GroupVector)> + '_ {
        self.a_points
            .iter()
            .enumerate()
            .flat_map(|(b, pts)| pts.iter().enumerate().map(move |(i, v)| (b, i as u32, v)))
    }

    /// Level-set sizes of `<delta, e>` over each branch of E separately.
    pub fn branch_counts(&self, delta: &GroupVector) -> Result<[Vec<u64>; 2]> {
        self.params().ensure_same(&delta.params())?;
        let (p, n) = (self.p, self.n);
        let d = delta.coords();
        // <delta, e(t)> = alpha t^2 + beta t + gamma on each branch
        let coeffs = [
            (d[0], add(d[1], d[2], p), d[3]),
            (mul(n, d[0], p), add(mul(n, d[1], p), d[2], p), mul(n, d[3], p)),
        ];
        let mut out = [vec![0u64; p as usize], vec![0u64; p as usize]];
        for (b, &(alpha, beta, gamma)) in coeffs.iter().enumerate() {
            let second = add(alpha, alpha, p);
            let (mut value, mut step) = (gamma, add(alpha, beta, p));
            for _ in 0..p {
                out[b][value as usize] += 1;
                value = add(value, step, p);
                step = add(step, second, p);
            }
        }
        Ok(out)
    }
}

/// The three shapes a difference of two elements of A can take.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "case")]
pub enum DifferenceCase {
    /// `(0, 2(i-j), 0, i^2-j^2)`, i != j
    Case1 { i: u32, j: u32 },
    /// `(0, 0, -2n(i-j), n(i^2-j^2))`, i != j
    Case2 { i: u32, j: u32 },
    /// `sign * (1, 2i, 2nj, i^2-nj^2)`
    Case3 { i: u32, j: u32, sign: i8 },
}

impl DifferenceCase {
    /// The difference vector this case describes.
    pub fn vector(&self, params: GroupParams, n: u32) -> GroupVector {
        let p = params.p();
        let sq = |x: u32| mul(x, x, p);
        let coords = match *self {
            DifferenceCase::Case1 { i, j } => {
                vec![0, mul(2, sub(i, j, p), p), 0, sub(sq(i), sq(j), p)]
            }
            DifferenceCase::Case2 { i, j } => vec![
                0,
                0,
                neg(mul(mul(2, n, p), sub(i, j, p), p), p),
                mul(n, sub(sq(i), sq(j), p), p),
            ],
            DifferenceCase::Case3 { i, j, sign } => {
                let v = [
                    1,
                    mul(2, i, p),
                    mul(mul(2, n, p), j, p),
                    sub(sq(i), mul(n, sq(j), p), p),
                ];
                v.iter()
                    .map(|&x| if sign < 0 { neg(x, p) } else { x })
                    .collect()
            }
        };
        GroupVector::from_reduced(params, coords)
    }
}

/// Matches `a - b` against the three difference shapes, recovering the
/// parameters from the coordinates and validating the remaining ones.
pub fn classify_difference(
    a: &GroupVector,
    b: &GroupVector,
    inst: &CounterexampleInstance,
) -> Result<DifferenceCase> {
    if a == b {
        return Err(Error::Parameter("difference of equal vectors".into()));
    }
    if !inst.a.contains(a) || !inst.a.contains(b) {
        return Err(Error::Parameter("vectors must belong to A".into()));
    }
    let p = inst.p;
    let n = inst.n;
    let delta = a - b;
    let x = delta.coords();
    let half = residue::inv(2, p).expect("p is odd");
    let two_n_inv = residue::inv(mul(2, n, p), p).expect("n is a unit");

    let candidate = match (x[0], x[1], x[2]) {
        // i - j = k, i^2 - j^2 = k (i + j)
        (0, k2, 0) if k2 != 0 => {
            let k = mul(k2, half, p);
            let s = mul(x[3], residue::inv(k, p).expect("k != 0"), p);
            let i = mul(add(s, k, p), half, p);
            let j = sub(i, k, p);
            Some(DifferenceCase::Case1 { i, j })
        }
        // -2n k = x3, n k (i + j) = x4
        (0, 0, k3) if k3 != 0 => {
            let k = neg(mul(k3, two_n_inv, p), p);
            let nk_inv = residue::inv(mul(n, k, p), p).expect("nk != 0");
            let s = mul(x[3], nk_inv, p);
            let i = mul(add(s, k, p), half, p);
            let j = sub(i, k, p);
            Some(DifferenceCase::Case2 { i, j })
        }
        (first, _, _) if first == 1 || first == p - 1 => {
            let sign: i8 = if first == 1 { 1 } else { -1 };
            let v = if sign < 0 { -&delta } else { delta.clone() };
            let i = mul(v.coords()[1], half, p);
            let j = mul(v.coords()[2], two_n_inv, p);
            Some(DifferenceCase::Case3 { i, j, sign })
        }
        _ => None,
    };

    match candidate {
        Some(case) if case.vector(inst.params(), n) == delta => Ok(case),
        _ => Err(Error::Consistency(format!(
            "difference ({delta}) of ({a}) and ({b}) matches none of the three forms"
        ))),
    }
}

/// `#{e in E : <delta, e> = c}`.
pub fn count_solutions(delta: &GroupVector, c: u32, set: &PointSet) -> Result<u64> {
    if delta.is_zero() {
        return Err(Error::Parameter("delta must be nonzero".into()));
    }
    let c = c % set.params().p();
    let mut count = 0;
    for e in set {
        if delta.dot(e)? == c {
            count += 1;
        }
    }
    Ok(count)
}

/// Number of roots in F_p of a quadratic with unit leading coefficient and
/// discriminant `disc` (p odd).
pub fn roots_from_discriminant(disc: u32, squares: &[bool]) -> u64 {
    match disc {
        0 => 1,
        d if squares[d as usize] => 2,
        _ => 0,
    }
}

/// Discriminants of the two branch quadratics for a Case 3 difference with
/// parameters (i, j), sign s and level c:
///
/// ```text
/// Q1(t) = t^2 + (2i + 2nj) t + (i^2 - n j^2) - s c
/// Q2(t) = n t^2 + (2ni + 2nj) t + (n i^2 - n^2 j^2) - s c
/// ```
pub fn case3_discriminants(p: u32, n: u32, i: u32, j: u32, c: u32, sign: i8) -> (u32, u32) {
    let sc = if sign < 0 { neg(c, p) } else { c % p };
    let sq = |x: u32| mul(x, x, p);
    let four = 4 % p;
    let b1 = add(mul(2, i, p), mul(mul(2, n, p), j, p), p);
    let c1 = sub(sub(sq(i), mul(n, sq(j), p), p), sc, p);
    let d1 = sub(sq(b1), mul(four, c1, p), p);
    let b2 = add(mul(mul(2, n, p), i, p), mul(mul(2, n, p), j, p), p);
    let c2 = sub(sub(mul(n, sq(i), p), mul(sq(n), sq(j), p), p), sc, p);
    let d2 = sub(sq(b2), mul(mul(four, n, p), c2, p), p);
    (d1, d2)
}

/// `4n(2nij + (n^2 + n) j^2 + s c)`.
pub fn case3_closed_form(p: u32, n: u32, i: u32, j: u32, c: u32, sign: i8) -> u32 {
    let sc = if sign < 0 { neg(c, p) } else { c % p };
    let inner = add(
        add(mul(mul(2, n, p), mul(i, j, p), p), mul(add(mul(n, n, p), n, p), mul(j, j, p), p), p),
        sc,
        p,
    );
    mul(mul(4 % p, n, p), inner, p)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiscriminantWitness {
    pub i: u32,
    pub j: u32,
    pub c: u32,
    pub sign: i8,
    pub d1: u32,
    pub d2: u32,
    pub closed_form: u32,
    pub reason: &'static str,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiscriminantReport {
    pub tuples_checked: u64,
    pub failures: Vec<DiscriminantWitness>,
    pub pass: bool,
}

/// Exhaustively checks `n D1 = D2 = 4n(2nij + (n^2+n)j^2 +- c)` and that the
/// two quadratics always have 2 roots between them.
pub fn verify_discriminant_identity(inst: &CounterexampleInstance) -> Result<DiscriminantReport> {
    let (p, n) = (inst.p, inst.n);
    let squares = residue::square_table(p)?;
    let mut failures = Vec::new();
    let mut failed = false;
    let mut tuples = 0u64;
    for i in 0..p {
        for j in 0..p {
            for c in 0..p {
                for sign in [1i8, -1] {
                    tuples += 1;
                    let (d1, d2) = case3_discriminants(p, n, i, j, c, sign);
                    let closed = case3_closed_form(p, n, i, j, c, sign);
                    let reason = if mul(n, d1, p) != d2 || d2 != closed {
                        Some("identity")
                    } else if (d1 == 0) != (d2 == 0) {
                        Some("zero discriminants disagree")
                    } else if roots_from_discriminant(d1, &squares) + roots_from_discriminant(d2, &squares) != 2 {
                        Some("root counts do not sum to two")
                    } else {
                        None
                    };
                    if let Some(reason) = reason {
                        failed = true;
                        if failures.len() < MAX_WITNESSES {
                            failures.push(DiscriminantWitness {
                                i,
                                j,
                                c,
                                sign,
                                d1,
                                d2,
                                closed_form: closed,
                                reason,
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(DiscriminantReport {
        tuples_checked: tuples,
        failures,
        pass: !failed,
    })
}

/// One mechanically checked step of the non-tiling spectral argument.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProofStep {
    pub step: &'static str,
    pub pass: bool,
    pub checked: u64,
    pub failures: Vec<String>,
}

struct StepBuilder {
    step: &'static str,
    checked: u64,
    failed: bool,
    failures: Vec<String>,
}

impl StepBuilder {
    fn new(step: &'static str) -> Self {
        StepBuilder {
            step,
            checked: 0,
            failed: false,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failed = true;
            if self.failures.len() < MAX_WITNESSES {
                self.failures.push(witness());
            }
        }
    }

    fn finish(self) -> ProofStep {
        ProofStep {
            step: self.step,
            pass: !self.failed,
            checked: self.checked,
            failures: self.failures,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CaseTally {
    pub case1: u64,
    pub case2: u64,
    pub case3_plus: u64,
    pub case3_minus: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CounterexampleReport {
    pub p: u32,
    pub n: u32,
    pub e_size: usize,
    pub a_size: usize,
    pub cases: CaseTally,
    pub steps: Vec<ProofStep>,
    pub discriminant: DiscriminantReport,
    pub pass: bool,
}

impl CounterexampleReport {
    pub fn failing_steps(&self) -> Vec<&'static str> {
        self.steps.iter().filter(|s| !s.pass).map(|s| s.step).collect()
    }
}

/// Runs every step of the argument for one (p, n). `n` defaults to the
/// smallest non-square.
pub fn verify_counterexample(p: u32, n: Option<u32>) -> Result<CounterexampleReport> {
    let inst = CounterexampleInstance::new(p, n)?;
    let n = inst.n;
    let squares = residue::square_table(p)?;
    let two_p = 2 * p as usize;
    let mut steps = Vec::new();

    let mut sizes = StepBuilder::new("construction_sizes");
    sizes.check(inst.e.len() == two_p, || format!("|E| = {}", inst.e.len()));
    sizes.check(inst.a.len() == two_p, || format!("|A| = {}", inst.a.len()));
    sizes.check(!residue::is_square(n, p)?, || format!("{n} is a square"));
    steps.push(sizes.finish());

    let mut spectrum = StepBuilder::new("is_spectrum");
    spectrum.check(is_spectrum(&inst.a, &inst.e)?, || "A is not a spectrum of E".into());
    steps.push(spectrum.finish());

    let labelled: Vec<(usize, u32, &GroupVector)> = inst.labelled_a().collect();

    let mut classify = StepBuilder::new("difference_classification");
    let mut case1 = StepBuilder::new("case1_linear_one_root_per_branch");
    let mut case2 = StepBuilder::new("case2_linear_one_root_per_branch");
    let mut case3 = StepBuilder::new("case3_quadratic_roots_sum_to_two");
    let mut tally = CaseTally {
        case1: 0,
        case2: 0,
        case3_plus: 0,
        case3_minus: 0,
    };
    let mut counting = StepBuilder::new("counting_vectors_all_two");
    for (x, &(ba, ia, a)) in labelled.iter().enumerate() {
        for (y, &(bb, ib, b)) in labelled.iter().enumerate() {
            if x == y {
                continue;
            }
            let counts = inst.branch_counts(&(a - b))?;
            if x < y {
                counting.check((0..p as usize).all(|c| counts[0][c] + counts[1][c] == 2), || {
                    format!("a=({a}) b=({b}) branch counts={counts:?}")
                });
            }
            let case = match classify_difference(a, b, &inst) {
                Ok(case) => case,
                Err(e) => {
                    classify.check(false, || e.to_string());
                    continue;
                }
            };
            let expected = match (ba, bb) {
                (0, 0) => DifferenceCase::Case1 { i: ia, j: ib },
                (1, 1) => DifferenceCase::Case2 { i: ia, j: ib },
                (0, _) => DifferenceCase::Case3 { i: ia, j: ib, sign: 1 },
                _ => DifferenceCase::Case3 { i: ib, j: ia, sign: -1 },
            };
            classify.check(case == expected, || format!("({a}) - ({b}): got {case:?}, expected {expected:?}"));

            match case {
                DifferenceCase::Case1 { .. } | DifferenceCase::Case2 { .. } => {
                    let (builder, counter) = if matches!(case, DifferenceCase::Case1 { .. }) {
                        (&mut case1, &mut tally.case1)
                    } else {
                        (&mut case2, &mut tally.case2)
                    };
                    *counter += 1;
                    builder.check(counts.iter().flatten().all(|&c| c == 1), || {
                        format!("{case:?}: branch counts {counts:?}")
                    });
                }
                DifferenceCase::Case3 { i, j, sign } => {
                    if sign > 0 {
                        tally.case3_plus += 1;
                    } else {
                        tally.case3_minus += 1;
                    }
                    let (mut d1, mut d2) = case3_discriminants(p, n, i, j, 0, sign);
                    let step1 = if sign > 0 { 4 % p } else { neg(4 % p, p) };
                    let step2 = mul(n, step1, p);
                    for c in 0..p {
                        if c > 0 {
                            d1 = add(d1, step1, p);
                            d2 = add(d2, step2, p);
                        }
                        let r1 = roots_from_discriminant(d1, &squares);
                        let r2 = roots_from_discriminant(d2, &squares);
                        let (q1, q2) = (counts[0][c as usize], counts[1][c as usize]);
                        case3.check(q1 == r1 && q2 == r2 && q1 + q2 == 2, || {
                            format!("{case:?} c={c}: roots ({q1},{q2}), discriminants predict ({r1},{r2})")
                        });
                    }
                }
            }
        }
    }
    steps.push(counting.finish());
    steps.push(classify.finish());
    steps.push(case1.finish());
    steps.push(case2.finish());
    steps.push(case3.finish());

    let discriminant = verify_discriminant_identity(&inst)?;
    let mut disc = StepBuilder::new("discriminant_identity");
    disc.checked = discriminant.tuples_checked;
    disc.failed = !discriminant.pass;
    disc.failures = discriminant
        .failures
        .iter()
        .map(|w| format!("{w:?}"))
        .collect();
    steps.push(disc.finish());

    let mut obstruction = StepBuilder::new("non_tiling_size_obstruction");
    let order = u128::from(p).pow(4);
    obstruction.check(order % two_p as u128 != 0, || format!("{two_p} divides {p}^4"));
    let search = tiling_partner_search(&inst.e, &SearchLimits::default())?;
    obstruction.check(!search.found && search.nodes_explored == 0, || {
        "partner search did not stop at the size check".into()
    });
    steps.push(obstruction.finish());

    let pass = steps.iter().all(|s| s.pass);
    Ok(CounterexampleReport {
        p,
        n,
        e_size: inst.e.len(),
        a_size: inst.a.len(),
        cases: tally,
        steps,
        discriminant,
        pass,
    })
}
