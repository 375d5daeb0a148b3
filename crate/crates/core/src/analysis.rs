//! Path counts in transitive tournaments, full scans over compositions, and
//! the checks built on top of them.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::count::{decimal, Count};
use crate::engine::{f_two_block, EngineError, PathFunction};
use crate::oracle::{OracleError, Tournament};
use crate::types::{compositions, Composition, SignedType};

/// Default upper bound on the scan total.
pub const DEFAULT_SCAN_LIMIT: u32 = 18;
/// Scans above this total are refused even when forced (2^31 rows).
pub const HARD_SCAN_LIMIT: u32 = 32;

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("symmetric type {ty} has odd F value {value}")]
    TheoremViolation { ty: SignedType, value: String },
    #[error("type has {found} arcs but a Hamiltonian path on {n} vertices has {}", n.saturating_sub(1))]
    TypeOrderMismatch { n: usize, found: u64 },
    #[error("scan total {p} exceeds the limit {limit}")]
    ScanTooLarge { p: u32, limit: u32 },
    #[error("total {p} is below the minimum {min}")]
    InvalidTotal { p: u32, min: u32 },
}

/// Number of Hamiltonian paths of type `a` in the transitive tournament of
/// order `n`: `F(|a|)`, halved when `a` is symmetric.
pub fn tt_count<C: Count>(
    f: &PathFunction<C>,
    n: usize,
    a: &SignedType,
) -> Result<C, AnalysisError> {
    if a.total() + 1 != n as u64 {
        return Err(AnalysisError::TypeOrderMismatch { n, found: a.total() });
    }
    let value = f.value(&a.magnitudes())?;
    if a.is_symmetric() {
        value.halve_exact().ok_or_else(|| AnalysisError::TheoremViolation {
            ty: a.clone(),
            value: value.to_string(),
        })
    } else {
        Ok(value)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScanLimits {
    pub max_p: u32,
    pub force: bool,
}

impl Default for ScanLimits {
    fn default() -> Self {
        ScanLimits {
            max_p: DEFAULT_SCAN_LIMIT,
            force: false,
        }
    }
}

impl ScanLimits {
    fn check(&self, p: u32, min: u32) -> Result<(), AnalysisError> {
        if p < min {
            return Err(AnalysisError::InvalidTotal { p, min });
        }
        let limit = if self.force {
            HARD_SCAN_LIMIT
        } else {
            self.max_p.min(HARD_SCAN_LIMIT)
        };
        if p > limit {
            return Err(AnalysisError::ScanTooLarge { p, limit });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct ScanRow<C: Count> {
    pub composition: Composition,
    #[serde(with = "decimal")]
    pub value: C,
}

/// `F` over every composition of `p`, ascending by value, ties by
/// composition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct ScanReport<C: Count> {
    pub p: u32,
    pub rows: Vec<ScanRow<C>>,
    pub max_row: ScanRow<C>,
    /// Last row, in sorted order, other than the all-ones composition.
    pub runner_up_row: ScanRow<C>,
}

pub fn scan<C: Count>(
    f: &PathFunction<C>,
    p: u32,
    limits: &ScanLimits,
) -> Result<ScanReport<C>, AnalysisError> {
    limits.check(p, 2)?;
    f.fill_to_total(p)?;
    let mut rows = compositions(p)
        .map(|composition| {
            let value = f.value(&composition)?;
            Ok(ScanRow { composition, value })
        })
        .collect::<Result<Vec<_>, EngineError>>()?;
    rows.sort_by(|a, b| {
        a.value
            .cmp(&b.value)
            .then_with(|| a.composition.cmp(&b.composition))
    });
    let ones = Composition::ones(p as usize);
    let max_row = rows.last().cloned().expect("p >= 2");
    let runner_up_row = rows
        .iter()
        .rev()
        .find(|r| r.composition != ones)
        .cloned()
        .expect("p >= 2 has a composition other than all ones");
    Ok(ScanReport {
        p,
        rows,
        max_row,
        runner_up_row,
    })
}

/// The composition `(1, 2, 1, ..., 1)` of `p`, for `p >= 3`.
pub fn runner_up_pattern(p: u32) -> Composition {
    assert!(p >= 3);
    let mut entries = vec![1u32; p as usize - 1];
    entries[1] = 2;
    Composition::new(entries).expect("positive entries")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct ConjectureVerdict<C: Count> {
    pub p: u32,
    /// `F(1, ..., 1)` is strictly larger than every other value.
    pub all_ones_is_max: bool,
    /// The next value is attained by `(1, 2, 1, ..., 1)` or its reverse and
    /// by nothing else.
    pub runner_up_is_1_2_ones: bool,
    pub runner_up_exceeds_half_max: bool,
    /// The signed form over the tournament of order `p + 1`: the
    /// antidirected type (even order) or `(1, -2, 1, -1, ..., 1)` (odd order)
    /// has at least as many paths as any type.
    pub tt_form_holds: bool,
    #[serde(with = "decimal")]
    pub max_value: C,
    #[serde(with = "decimal")]
    pub runner_up_value: C,
    pub witnesses: Vec<Composition>,
}

impl<C: Count> ConjectureVerdict<C> {
    pub fn holds(&self) -> bool {
        self.all_ones_is_max
            && self.runner_up_is_1_2_ones
            && self.runner_up_exceeds_half_max
            && self.tt_form_holds
    }
}

pub fn check_conjecture<C: Count>(
    f: &PathFunction<C>,
    p: u32,
    limits: &ScanLimits,
) -> Result<ConjectureVerdict<C>, AnalysisError> {
    limits.check(p, 3)?;
    let report = scan(f, p, limits)?;
    let ones = Composition::ones(p as usize);
    let pattern = runner_up_pattern(p);
    let pattern_rev = pattern.reverse();
    let max_value = f.value(&ones)?;

    let mut witnesses = Vec::new();
    let rivals: Vec<&ScanRow<C>> = report
        .rows
        .iter()
        .filter(|r| r.composition != ones && r.value >= max_value)
        .collect();
    let all_ones_is_max = rivals.is_empty();
    witnesses.extend(rivals.iter().map(|r| r.composition.clone()));

    let runner_up_value = report.runner_up_row.value.clone();
    let attaining: Vec<&Composition> = report
        .rows
        .iter()
        .filter(|r| r.composition != ones && r.value == runner_up_value)
        .map(|r| &r.composition)
        .collect();
    let strays: Vec<&Composition> = attaining
        .iter()
        .copied()
        .filter(|c| **c != pattern && **c != pattern_rev)
        .collect();
    let runner_up_is_1_2_ones = strays.is_empty() && attaining.contains(&&pattern);
    witnesses.extend(strays.into_iter().cloned());

    let two = C::one() + C::one();
    let runner_up_exceeds_half_max = runner_up_value.clone() * two > max_value;

    let n = p as usize + 1;
    let champion = if p % 2 == 1 {
        ones.lift(true)
    } else {
        pattern.lift(true)
    };
    let best = tt_count(f, n, &champion)?;
    let mut tt_form_holds = true;
    for row in &report.rows {
        for forward in [true, false] {
            let a = row.composition.lift(forward);
            if tt_count(f, n, &a)? > best {
                tt_form_holds = false;
                if !witnesses.contains(&row.composition) {
                    witnesses.push(row.composition.clone());
                }
            }
        }
    }

    Ok(ConjectureVerdict {
        p,
        all_ones_is_max,
        runner_up_is_1_2_ones,
        runner_up_exceeds_half_max,
        tt_form_holds,
        max_value,
        runner_up_value,
        witnesses,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PropertyLimits {
    /// Every family is checked on all parameter tuples with total at most
    /// this.
    pub max_total: u32,
}

impl Default for PropertyLimits {
    fn default() -> Self {
        PropertyLimits { max_total: 16 }
    }
}

const MAX_REPORTED_FAILURES: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyReport {
    pub name: String,
    pub instances: u64,
    pub failures: u64,
    /// First few failing instances, for diagnosis.
    pub examples: Vec<String>,
}

impl FamilyReport {
    fn new(name: &str) -> Self {
        FamilyReport {
            name: name.to_string(),
            instances: 0,
            failures: 0,
            examples: Vec::new(),
        }
    }

    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.instances += 1;
        if !ok {
            self.failures += 1;
            if self.examples.len() < MAX_REPORTED_FAILURES {
                self.examples.push(describe());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub max_total: u32,
    pub families: Vec<FamilyReport>,
}

impl PropertyReport {
    pub fn passed(&self) -> bool {
        self.families.iter().all(FamilyReport::passed)
    }

    pub fn family(&self, name: &str) -> Option<&FamilyReport> {
        self.families.iter().find(|f| f.name == name)
    }
}

/// Values of `F` recorded as reference points.
pub const KNOWN_VALUES: &[(&[u32], u64)] = &[
    (&[1, 1], 2),
    (&[1, 1, 1], 5),
    (&[3, 3], 20),
    (&[1, 1, 4], 20),
    (&[3, 4], 35),
    (&[1, 1, 5], 27),
    (&[1, 2, 4], 85),
    (&[3, 1, 3], 69),
    (&[2, 11, 5], 637_924),
    (&[11, 3, 4], 631_787),
    (&[2, 12, 5], 1_015_988),
    (&[12, 3, 4], 984_503),
    (&[6, 7, 3], 835_549),
    (&[4, 4, 8], 614_823),
    (&[1, 3, 1], 19),
    (&[2, 1, 2], 19),
    (&[1, 2, 3, 1], 315),
    (&[2, 1, 2, 2], 315),
    (&[2, 4, 2], 379),
    (&[3, 2, 3], 379),
];

/// A plausible ordering claim together with an instance refuting it: the
/// premise holds yet `F(left)` compares to `F(right)` as `observed`.
pub struct Refutation {
    pub claim: &'static str,
    pub left: &'static [u32],
    pub right: &'static [u32],
    pub premise: fn(&[u32], &[u32]) -> bool,
    pub observed: std::cmp::Ordering,
}

fn product(c: &[u32]) -> u64 {
    c.iter().map(|&x| u64::from(x)).product()
}

fn outer_product(c: &[u32]) -> u64 {
    u64::from(c[0]) * u64::from(c[c.len() - 1])
}

fn tail_product(c: &[u32]) -> u64 {
    product(&c[1..])
}

pub const REFUTATIONS: &[Refutation] = {
    use std::cmp::Ordering::{Equal, Greater};
    &[
        Refutation {
            claim: "fewer blocks give a smaller value",
            left: &[3, 3],
            right: &[1, 1, 4],
            premise: |l, r| l.len() < r.len(),
            observed: Equal,
        },
        Refutation {
            claim: "fewer blocks give a smaller value",
            left: &[3, 4],
            right: &[1, 1, 5],
            premise: |l, r| l.len() < r.len(),
            observed: Greater,
        },
        Refutation {
            claim: "F(a,m,n) < F(m',a,n') when mn < m'n'",
            left: &[1, 2, 4],
            right: &[3, 1, 3],
            premise: |l, r| l[0] == r[1] && tail_product(l) < outer_product(r),
            observed: Greater,
        },
        Refutation {
            claim: "F(m,a,n) < F(a,m',n') when mn < m'n'",
            left: &[2, 11, 5],
            right: &[11, 3, 4],
            premise: |l, r| l[1] == r[0] && outer_product(l) < tail_product(r),
            observed: Greater,
        },
        Refutation {
            claim: "F(m,a,n) < F(a,m',n') when mn < m'n'",
            left: &[2, 12, 5],
            right: &[12, 3, 4],
            premise: |l, r| l[1] == r[0] && outer_product(l) < tail_product(r),
            observed: Greater,
        },
        Refutation {
            claim: "F(a,m,n) < F(a',m',n') when amn < a'm'n'",
            left: &[6, 7, 3],
            right: &[4, 4, 8],
            premise: |l, r| product(l) < product(r),
            observed: Greater,
        },
        Refutation {
            claim: "distinct non-reversed compositions have distinct values",
            left: &[1, 3, 1],
            right: &[2, 1, 2],
            premise: |l, r| l != r && !l.iter().eq(r.iter().rev()),
            observed: Equal,
        },
        Refutation {
            claim: "distinct non-reversed compositions have distinct values",
            left: &[1, 2, 3, 1],
            right: &[2, 1, 2, 2],
            premise: |l, r| l != r && !l.iter().eq(r.iter().rev()),
            observed: Equal,
        },
        Refutation {
            claim: "distinct non-reversed compositions have distinct values",
            left: &[2, 4, 2],
            right: &[3, 2, 3],
            premise: |l, r| l != r && !l.iter().eq(r.iter().rev()),
            observed: Equal,
        },
    ]
};

struct Eval<'a, C: Count>(&'a PathFunction<C>);

impl<C: Count> Eval<'_, C> {
    fn of(&self, entries: &[u32]) -> Result<C, EngineError> {
        let c = Composition::new(entries.to_vec()).expect("positive entries");
        self.0.value(&c)
    }
}

fn show(entries: &[u32]) -> String {
    let parts: Vec<String> = entries.iter().map(u32::to_string).collect();
    format!("({})", parts.join(","))
}

/// Checks every ordering family exhaustively up to `limits.max_total`, plus
/// the fixed reference values and refutations.
pub fn run_property_suite<C: Count>(
    f: &PathFunction<C>,
    limits: &PropertyLimits,
) -> Result<PropertyReport, AnalysisError> {
    let top = limits.max_total;
    f.fill_to_total(top)?;
    let ev = Eval(f);
    let mut families = Vec::new();

    let mut fam = FamilyReport::new("single-block-minimum");
    for p in 1..=top {
        for c in compositions(p) {
            let v = f.value(&c)?;
            fam.record((v == C::one()) == (c.len() == 1), || format!("F({c}) = {v}"));
        }
    }
    families.push(fam);

    let mut fam = FamilyReport::new("two-block-binomial");
    for p in 2..=top {
        for m in 1..p {
            let v = ev.of(&[m, p - m])?;
            let closed = f_two_block::<C>(m, p - m);
            fam.record(closed.as_ref() == Some(&v), || {
                format!("F({m},{}) = {v}, binomial {closed:?}", p - m)
            });
        }
    }
    families.push(fam);

    let mut fam = FamilyReport::new("partition-sum");
    let mut factorial = C::one();
    for p in 1..=top {
        factorial = factorial * C::from_u32(p + 1).expect("small");
        let mut sum = C::zero();
        for c in compositions(p) {
            sum = sum + f.value(&c)?;
        }
        let two = C::one() + C::one();
        fam.record(sum.clone() * two == factorial, || {
            format!("sum over compositions of {p} = {sum}")
        });
    }
    families.push(fam);

    let mut fam = FamilyReport::new("two-block-order");
    for p in 2..=top {
        for m in 1..p {
            for m2 in 1..p {
                let (n, n2) = (p - m, p - m2);
                let lt = ev.of(&[m, n])? < ev.of(&[m2, n2])?;
                fam.record(lt == (m * n < m2 * n2), || {
                    format!("F({m},{n}) < F({m2},{n2}) is {lt}")
                });
            }
        }
    }
    families.push(fam);

    let mut fam = FamilyReport::new("two-vs-three-blocks");
    for p in 3..=top {
        for a in 1..p - 1 {
            let t = p - a;
            let two = ev.of(&[a, t])?;
            for m in 1..t {
                let three = ev.of(&[a, m, t - m])?;
                fam.record(two < three, || {
                    format!("F({a},{t}) = {two} >= F({a},{m},{}) = {three}", t - m)
                });
            }
        }
    }
    families.push(fam);

    let mut outer = FamilyReport::new("three-block-outer-iff");
    let mut middle = FamilyReport::new("three-block-middle-iff");
    for p in 3..=top {
        for a in 1..p - 1 {
            let rest = p - a;
            for m in 1..rest {
                let n = rest - m;
                for m2 in 1..rest {
                    let n2 = rest - m2;
                    let lt = ev.of(&[a, m, n])? < ev.of(&[a, m2, n2])?;
                    let swapped = (m2, n2) == (n, m) && m != n;
                    let expected = m * n < m2 * n2 || (m * n == m2 * n2 && swapped && m < n);
                    outer.record(lt == expected, || {
                        format!("F({a},{m},{n}) < F({a},{m2},{n2}) is {lt}")
                    });

                    let lt = ev.of(&[m, a, n])? < ev.of(&[m2, a, n2])?;
                    middle.record(lt == (m * n < m2 * n2), || {
                        format!("F({m},{a},{n}) < F({m2},{a},{n2}) is {lt}")
                    });
                }
            }
        }
    }
    families.push(outer);
    families.push(middle);

    let mut fam = FamilyReport::new("four-block-swap");
    for p in 6..=top {
        for m in 1..p {
            for n in m + 1..p {
                for a in 1..p {
                    let Some(b) = p.checked_sub(m + n + a) else {
                        continue;
                    };
                    if b <= a {
                        continue;
                    }
                    let l = ev.of(&[m, a, b, n])?;
                    let r = ev.of(&[m, b, a, n])?;
                    fam.record(l > r, || {
                        format!("F({m},{a},{b},{n}) = {l} <= F({m},{b},{a},{n}) = {r}")
                    });
                }
            }
        }
    }
    families.push(fam);

    let mut fam = FamilyReport::new("symmetric-evenness");
    for p in 2..=top {
        for c in compositions(p).filter(|c| c.len() % 2 == 0 && c.is_palindrome()) {
            let v = f.value(&c)?;
            fam.record(v.is_even(), || format!("F({c}) = {v} is odd"));
        }
    }
    families.push(fam);

    let mut fam = FamilyReport::new("known-values");
    for &(entries, expected) in KNOWN_VALUES {
        let v = ev.of(entries)?;
        let expected = C::from_u64_exact(expected);
        fam.record(expected.as_ref() == Some(&v), || {
            format!("F{} = {v}, expected {expected:?}", show(entries))
        });
    }
    families.push(fam);

    let mut fam = FamilyReport::new("refutations");
    for r in REFUTATIONS {
        let l = ev.of(r.left)?;
        let rv = ev.of(r.right)?;
        let ok = (r.premise)(r.left, r.right) && l.cmp(&rv) == r.observed;
        fam.record(ok, || {
            format!(
                "{}: F{} = {l}, F{} = {rv}",
                r.claim,
                show(r.left),
                show(r.right)
            )
        });
    }
    families.push(fam);

    Ok(PropertyReport {
        max_total: top,
        families,
    })
}

/// A type whose brute-force count disagrees with the predicted one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct Discrepancy<C: Count> {
    pub n: usize,
    #[serde(rename = "type")]
    pub ty: SignedType,
    #[serde(with = "decimal")]
    pub oracle: C,
    #[serde(with = "decimal")]
    pub reference: C,
}

impl<C: Count> fmt::Display for Discrepancy<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "n={} type ({}): oracle {} vs reference {}",
            self.n, self.ty, self.oracle, self.reference
        )
    }
}

/// Which tournaments a verification run covers and what the census is
/// compared with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerifyKind {
    /// Transitive tournaments against the path-function.
    Transitive,
    /// Nearly-transitive tournaments: directed paths against `2^(n-2) + 1`,
    /// and every type against the complement.
    NearlyTransitive,
    /// Seeded random tournaments against their complements.
    Random,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct OracleReport<C: Count> {
    pub kind: VerifyKind,
    pub max_n: usize,
    pub seed: Option<u64>,
    pub types_checked: u64,
    pub discrepancies: Vec<Discrepancy<C>>,
}

impl<C: Count> OracleReport<C> {
    pub fn is_clean(&self) -> bool {
        self.discrepancies.is_empty()
    }
}

fn all_keys(total: u32) -> BTreeSet<SignedType> {
    compositions(total)
        .flat_map(|c| [c.lift(true).canonical_key(), c.lift(false).canonical_key()])
        .collect()
}

fn census_keys<C: Count>(n: usize, census: &crate::oracle::TypeCensus<C>) -> BTreeSet<SignedType> {
    let mut keys = all_keys(n as u32 - 1);
    keys.extend(census.counts.keys().cloned());
    keys
}

/// Compares the transitive census with [`tt_count`] for every order in
/// `3..=max_n`.
pub fn verify_against_oracle<C: Count>(
    f: &PathFunction<C>,
    max_n: usize,
    census_limit: usize,
) -> Result<OracleReport<C>, AnalysisError> {
    verify(f, VerifyKind::Transitive, max_n, 0, census_limit)
}

/// Counts per type in `t` and its complement must agree.
pub fn complement_discrepancies<C: Count>(
    t: &Tournament,
    census_limit: usize,
) -> Result<(u64, Vec<Discrepancy<C>>), AnalysisError> {
    let n = t.order();
    let direct = t.census_with_limit::<C>(census_limit)?;
    let co = t.complement().census_with_limit::<C>(census_limit)?;
    let mut keys = census_keys(n, &direct);
    keys.extend(co.counts.keys().cloned());
    let mut out = Vec::new();
    for key in &keys {
        let (a, b) = (direct.get(key), co.get(key));
        if a != b {
            out.push(Discrepancy {
                n,
                ty: key.clone(),
                oracle: a,
                reference: b,
            });
        }
    }
    Ok((keys.len() as u64, out))
}

pub fn verify<C: Count>(
    f: &PathFunction<C>,
    kind: VerifyKind,
    max_n: usize,
    seed: u64,
    census_limit: usize,
) -> Result<OracleReport<C>, AnalysisError> {
    if max_n < 3 {
        return Err(OracleError::InvalidOrder { n: max_n, min: 3 }.into());
    }
    let mut types_checked = 0;
    let mut discrepancies = Vec::new();
    for n in 3..=max_n {
        match kind {
            VerifyKind::Transitive => {
                let census = Tournament::transitive(n)?.census_with_limit::<C>(census_limit)?;
                for key in census_keys(n, &census) {
                    let oracle = census.get(&key);
                    let reference = tt_count(f, n, &key)?;
                    types_checked += 1;
                    if oracle != reference {
                        discrepancies.push(Discrepancy {
                            n,
                            ty: key,
                            oracle,
                            reference,
                        });
                    }
                }
            }
            VerifyKind::NearlyTransitive => {
                let t = Tournament::nearly_transitive(n)?;
                let directed = SignedType::new(vec![(n - 1) as i32]).expect("nonzero");
                let oracle = t.census_with_limit::<C>(census_limit)?.get(&directed);
                let reference = C::from_u64_exact((1u64 << (n - 2)) + 1).expect("small");
                types_checked += 1;
                if oracle != reference {
                    discrepancies.push(Discrepancy {
                        n,
                        ty: directed.canonical_key(),
                        oracle,
                        reference,
                    });
                }
                let (checked, diffs) = complement_discrepancies(&t, census_limit)?;
                types_checked += checked;
                discrepancies.extend(diffs);
            }
            VerifyKind::Random => {
                let t = Tournament::random(n, seed)?;
                let (checked, diffs) = complement_discrepancies(&t, census_limit)?;
                types_checked += checked;
                discrepancies.extend(diffs);
            }
        }
    }
    Ok(OracleReport {
        kind,
        max_n,
        seed: (kind == VerifyKind::Random).then_some(seed),
        types_checked,
        discrepancies,
    })
}
