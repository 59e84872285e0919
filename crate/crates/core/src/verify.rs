//! Randomized self-verification suites, run in exact mode.
//!
//! Each suite draws seeded inputs, checks one family of identities, and on
//! failure shrinks the offending instance (by merging adjacent categories,
//! which preserves the total mass) before reporting it as JSON.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::cumulative::{
    cum_array, diff_array, is_monge, lemma1_check, Array2, ContingencyTable, CumulativeArray,
};
use crate::frechet::{
    check_membership_classical, check_membership_tropical, extract_table, lower_bound_closed,
    lower_bound_greedy, lower_bound_greedy_with, random_feasible, sandwich_check_against,
    upper_bound_closed, upper_bound_residuated, BoundsResult, FrechetInstance, SweepOrder,
};
use crate::gen;
use crate::numeric::{Rational, Scalar, Tolerance};
use crate::tropical::TropicalMatrix;

type Instance = FrechetInstance<Rational>;
type BoundFn = fn(&Instance) -> CumulativeArray<Rational>;

/// Iteration counts, seed, and the bound implementations under test.
#[derive(Clone)]
pub struct VerifyConfig {
    pub iterations: usize,
    pub max_dim: usize,
    pub seed: u64,
    pub upper: BoundFn,
    pub lower: BoundFn,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            iterations: 200,
            max_dim: 20,
            seed: 0,
            upper: upper_bound_residuated,
            lower: lower_bound_greedy,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub passed: usize,
    pub failed: usize,
    pub counterexample: Option<Value>,
}

impl SuiteResult {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            passed: 0,
            failed: 0,
            counterexample: None,
        }
    }

    fn record(&mut self, ok: bool, counterexample: impl FnOnce() -> Value) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
            if self.counterexample.is_none() {
                self.counterexample = Some(counterexample());
            }
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "passed": self.passed,
            "failed": self.failed,
            "counterexample": self.counterexample,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub iterations: usize,
    pub suites: Vec<SuiteResult>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.suites.iter().all(|s| s.failed == 0)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "iterations": self.iterations,
            "all_passed": self.all_passed(),
            "suites": self.suites.iter().map(SuiteResult::to_json).collect::<Vec<_>>(),
        })
    }
}

/// Runs every suite. Zero iterations yields a vacuous pass.
pub fn run_all(config: &VerifyConfig) -> VerifyReport {
    let suites = vec![
        upper_oracle_suite(config),
        lower_oracle_suite(config),
        bounds_membership_suite(config),
        membership_equivalence_suite(config),
        sandwich_suite(config),
        galois_suite(config),
        monge_suite(config),
        row_sums_suite(config),
    ];
    VerifyReport {
        iterations: config.iterations,
        suites,
    }
}

fn rng_for(config: &VerifyConfig, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(config.seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn instances(config: &VerifyConfig, salt: u64) -> impl Iterator<Item = Instance> {
    let mut rng = rng_for(config, salt);
    let max_dim = config.max_dim;
    (0..config.iterations).map(move |_| gen::random_instance(&mut rng, max_dim, Tolerance::EXACT))
}

/// Greedily merges adjacent categories of `p` or `q` while the failure
/// persists.
pub fn shrink_instance(inst: &Instance, fails: impl Fn(&Instance) -> bool) -> Instance {
    let mut current = inst.clone();
    'outer: loop {
        for side in 0..2 {
            let masses = if side == 0 { current.p().masses() } else { current.q().masses() };
            for k in 0..masses.len().saturating_sub(1) {
                let mut merged = masses.to_vec();
                let right = merged.remove(k + 1);
                merged[k] = merged[k].add(&right);
                let (p, q) = if side == 0 {
                    (merged, current.q().masses().to_vec())
                } else {
                    (current.p().masses().to_vec(), merged)
                };
                if let Ok(candidate) = FrechetInstance::from_masses(p, q, Tolerance::EXACT) {
                    if fails(&candidate) {
                        current = candidate;
                        continue 'outer;
                    }
                }
            }
        }
        return current;
    }
}

fn instance_counterexample(suite: &str, inst: &Instance, fails: impl Fn(&Instance) -> bool) -> Value {
    let small = shrink_instance(inst, fails);
    json!({ "suite": suite, "instance": small.to_json() })
}

fn upper_oracle_suite(config: &VerifyConfig) -> SuiteResult {
    let upper = config.upper;
    let fails = move |i: &Instance| upper(i) != upper_bound_closed(i);
    let mut result = SuiteResult::new("upper_oracle");
    for inst in instances(config, 1) {
        result.record(!fails(&inst), || instance_counterexample("upper_oracle", &inst, fails));
    }
    result
}

fn lower_oracle_suite(config: &VerifyConfig) -> SuiteResult {
    let lower = config.lower;
    let fails = move |i: &Instance| {
        let base = lower(i);
        if base != lower_bound_closed(i) {
            return true;
        }
        if [SweepOrder::RowsOuter, SweepOrder::AntiDiagonal]
            .into_iter()
            .any(|o| lower_bound_greedy_with(i, o) != base)
        {
            return true;
        }
        // scale equivariance
        let lambda = Rational::from_ratio(1, 3);
        let scaled = i.scaled(&lambda).expect("positive factor");
        lower(&scaled).values() != &base.values().map(|v| v.mul(&lambda))
    };
    let mut result = SuiteResult::new("lower_oracle");
    for inst in instances(config, 2) {
        result.record(!fails(&inst), || instance_counterexample("lower_oracle", &inst, fails));
    }
    result
}

fn bounds_membership_suite(config: &VerifyConfig) -> SuiteResult {
    let (upper, lower) = (config.upper, config.lower);
    let fails = move |i: &Instance| {
        [upper(i), lower(i)].iter().any(|c| {
            !is_monge(c.values())
                || match extract_table(c, Tolerance::EXACT) {
                    Ok(t) => !check_membership_classical(&t, i).unwrap_or(false),
                    Err(_) => true,
                }
        })
    };
    let mut result = SuiteResult::new("bounds_membership");
    for inst in instances(config, 3) {
        result.record(!fails(&inst), || instance_counterexample("bounds_membership", &inst, fails));
    }
    result
}

/// Adds one unit of `1/scale` to a random cell.
pub fn perturb_cell<R: Rng + ?Sized>(
    rng: &mut R,
    table: &ContingencyTable<Rational>,
    unit: &Rational,
) -> ContingencyTable<Rational> {
    let (n, m) = table.shape();
    let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..m));
    let mut cells = table.cells().clone();
    cells.set(i, j, cells.get(i, j).add(unit));
    ContingencyTable::new(cells).expect("still nonnegative")
}

fn membership_equivalence_suite(config: &VerifyConfig) -> SuiteResult {
    let mut result = SuiteResult::new("membership_equivalence");
    let mut rng = rng_for(config, 4);
    for inst in instances(config, 5) {
        let unit = Rational::from_ratio(1, crate::numeric::common_scale(
            inst.p().masses().iter().chain(inst.q().masses()),
        ) as i64);
        let feasible = random_feasible(&inst, rng.gen()).expect("feasible instance");
        let perturbed = perturb_cell(&mut rng, &feasible, &unit);
        for (table, expect_member) in [(feasible, true), (perturbed, false)] {
            let classical = check_membership_classical(&table, &inst).unwrap_or(false);
            let tropical = check_membership_tropical(&table, &inst).unwrap_or(false);
            result.record(classical == tropical && classical == expect_member, || {
                json!({
                    "suite": "membership_equivalence",
                    "instance": inst.to_json(),
                    "table": table.to_json(),
                    "classical": classical,
                    "tropical": tropical,
                })
            });
        }
    }
    result
}

fn sandwich_suite(config: &VerifyConfig) -> SuiteResult {
    let mut result = SuiteResult::new("sandwich");
    let mut rng = rng_for(config, 6);
    for inst in instances(config, 7) {
        let upper_cumulative = (config.upper)(&inst);
        let lower_cumulative = (config.lower)(&inst);
        let tables = (
            extract_table(&upper_cumulative, Tolerance::EXACT),
            extract_table(&lower_cumulative, Tolerance::EXACT),
        );
        let (Ok(upper_table), Ok(lower_table)) = tables else {
            result.record(false, || json!({ "suite": "sandwich", "instance": inst.to_json() }));
            continue;
        };
        let bounds = BoundsResult {
            upper_cumulative,
            lower_cumulative,
            upper_table,
            lower_table,
        };
        let seed: u64 = rng.gen();
        let table = random_feasible(&inst, seed).expect("feasible instance");
        let ok = sandwich_check_against(&table, &inst, &bounds).is_ok_and(|r| r.holds());
        result.record(ok, || {
            json!({
                "suite": "sandwich",
                "instance": inst.to_json(),
                "seed": seed,
                "table": table.to_json(),
            })
        });
    }
    result
}

/// Checks both Galois equivalences on one random triple of compatible shapes.
pub fn galois_trial<R: Rng + ?Sized>(rng: &mut R, max_dim: usize, p_inf: f64) -> Result<(), Value> {
    let k = rng.gen_range(1..=max_dim);
    let n = rng.gen_range(1..=max_dim);
    let m = rng.gen_range(1..=max_dim);
    let a: TropicalMatrix<Rational> = gen::random_tropical(rng, k, n, p_inf);
    let b = gen::random_tropical(rng, k, m, p_inf);
    let x = gen::random_tropical(rng, n, m, p_inf);
    let left = a.odot(&x).and_then(|ax| ax.le(&b)).expect("conformable")
        == x.le(&a.ldiv(&b).expect("conformable")).expect("same shape");

    let c = gen::random_tropical(rng, m, k, p_inf);
    let d = gen::random_tropical(rng, n, k, p_inf);
    let right = x.odot(&c).and_then(|xc| xc.le(&d)).expect("conformable")
        == x.le(&d.rdiv(&c).expect("conformable")).expect("same shape");

    if left && right {
        Ok(())
    } else {
        Err(json!({
            "suite": "galois",
            "a": a.to_json(), "b": b.to_json(), "x": x.to_json(),
            "c": c.to_json(), "d": d.to_json(),
            "left_holds": left, "right_holds": right,
        }))
    }
}

fn galois_suite(config: &VerifyConfig) -> SuiteResult {
    let mut result = SuiteResult::new("galois");
    let mut rng = rng_for(config, 8);
    for _ in 0..config.iterations {
        let outcome = galois_trial(&mut rng, 6, 0.1);
        let ok = outcome.is_ok();
        result.record(ok, || outcome.err().unwrap_or(Value::Null));
    }
    result
}

/// `is_monge(c)` agrees with strict extraction of cell masses.
pub fn monge_equivalence_holds(c: &Array2<Rational>) -> bool {
    is_monge(c) == diff_array(c, Tolerance::EXACT).is_ok()
}

fn monge_suite(config: &VerifyConfig) -> SuiteResult {
    let mut result = SuiteResult::new("monge_equivalence");
    let mut rng = rng_for(config, 9);
    for _ in 0..config.iterations {
        let (n, m) = (rng.gen_range(1..=8), rng.gen_range(1..=8));
        let signed = gen::random_signed_cumulative::<Rational, _>(&mut rng, n, m);
        result.record(monge_equivalence_holds(&signed), || {
            json!({ "suite": "monge_equivalence", "array": signed.to_json() })
        });
        let table: ContingencyTable<Rational> =
            ContingencyTable::new(gen::random_nonneg_array(&mut rng, n, m)).expect("nonnegative");
        let cum = cum_array(&table);
        result.record(is_monge(cum.values()), || {
            json!({ "suite": "monge_equivalence", "table": table.to_json() })
        });
    }
    result
}

fn row_sums_suite(config: &VerifyConfig) -> SuiteResult {
    let mut result = SuiteResult::new("row_sums");
    let mut rng = rng_for(config, 10);
    for _ in 0..config.iterations {
        let (n, m) = (rng.gen_range(1..=20), rng.gen_range(1..=20));
        let u = gen::random_nonneg_array::<Rational, _>(&mut rng, n, m);
        result.record(lemma1_check(&u, Tolerance::EXACT), || {
            json!({ "suite": "row_sums", "matrix": u.to_json() })
        });
    }
    result
}
