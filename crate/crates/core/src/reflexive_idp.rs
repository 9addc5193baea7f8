//! Number-theoretic reflexivity and IDP tests for `Δ(1,q)`.
//!
//! For reflexive `q`, `Δ(1,q)` is IDP iff for every `q_j` and every
//! `1 <= b < q_j` with height `h(b) >= 2` there is some `0 < c < b` with
//! `h(c) = 1` and `⌊b q_i/q_j⌋ - ⌊c q_i/q_j⌋ = ⌊(b-c) q_i/q_j⌋` for all
//! `i != j`, where
//!
//! ```text
//! h(b) = b (1 + Σ_{i≠j} q_i) / q_j - Σ_{i≠j} ⌊b q_i / q_j⌋.
//! ```
//!
//! Entries with equal value impose identical constraints, so the outer loop
//! runs over distinct values only.

use serde::Serialize;

use crate::arith;
use crate::error::{Error, Result};
use crate::weights::{SupportForm, WeightVector};

/// Largest `q_j` for which the `b`-range of the full IDP test is scanned.
pub const IDP_SCAN_CAP: u128 = 1 << 24;

/// `q_i | N(q)` for every `i`.
pub fn is_reflexive(q: &WeightVector) -> bool {
    let volume = q.normalized_volume();
    q.support_form().support().iter().all(|&r| volume % r == 0)
}

/// Failing index of the necessary condition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct NecessaryWitness {
    /// 0-based position of the first entry equal to `value`.
    pub j: u128,
    pub value: u128,
}

/// `1 + Σ_i (q_i mod q_j) = q_j` for every `j`; returns the least failing `j`.
pub fn satisfies_necessary_condition(q: &WeightVector) -> (bool, Option<NecessaryWitness>) {
    let form = q.support_form();
    for (k, &rj) in form.support().iter().enumerate() {
        // Each term is at most x_i r_i, so the sum stays below N(q).
        let total: u128 = 1 + form.runs().map(|(r, x)| x * (r % rj)).sum::<u128>();
        if total != rj {
            return (
                false,
                Some(NecessaryWitness {
                    j: q.run_start(k),
                    value: rj,
                }),
            );
        }
    }
    (true, None)
}

/// The box `x_i <= r_{i+1}/r_i` (`i < d`) and, for every `j < d` with
/// `r_j ∤ r_d`, `x_d <= r_j / (r_d mod r_j)`.
pub fn multiplicity_bounds_ok(form: &SupportForm) -> Result<bool> {
    let d = form.d();
    if d < 2 {
        return Err(Error::domain("multiplicity bounds need d >= 2"));
    }
    let r = form.support();
    let x = form.multiplicity();
    let lower = (0..d - 1).all(|i| arith::mul_le(x[i], r[i], r[i + 1]));
    let last = r[d - 1];
    let top = (0..d - 1)
        .filter(|&j| last % r[j] != 0)
        .all(|j| arith::mul_le(x[d - 1], last % r[j], r[j]));
    Ok(lower && top)
}

/// Per-`q_j` state for the height function and the additivity check.
struct FacetScan<'a> {
    form: &'a SupportForm,
    qj: u128,
    /// `N(q) / q_j`, integral for reflexive `q`.
    per_step: u128,
    /// `(r_i mod q_j)` for the distinct `r_i != q_j`.
    residues: Vec<u128>,
}

impl<'a> FacetScan<'a> {
    fn new(q: &'a WeightVector, qj: u128) -> Result<Self> {
        let volume = q.normalized_volume();
        if volume % qj != 0 {
            return Err(Error::NotReflexive(q.to_string()));
        }
        let form = q.support_form();
        let residues = form
            .support()
            .iter()
            .filter(|&&r| r != qj)
            .map(|&r| r % qj)
            .filter(|&e| e != 0)
            .collect();
        Ok(Self {
            form,
            qj,
            per_step: volume / qj,
            residues,
        })
    }

    /// `h(b) = b N/q_j - Σ_i x_i ⌊b r_i / q_j⌋` (the `i = j` copies included).
    fn height(&self, b: u128) -> Result<u128> {
        let mut floors = 0u128;
        for (r, x) in self.form.runs() {
            let f = arith::mul(b, r, "height")? / self.qj;
            floors = arith::add(floors, arith::mul(x, f, "height")?, "height")?;
        }
        let total = arith::mul(b, self.per_step, "height")?;
        Ok(total - floors)
    }

    /// Heights `h(0), ..., h(q_j - 1)` by remainder stepping.
    fn heights(&self) -> Vec<u128> {
        let qj = self.qj;
        // ⌊b r / q_j⌋ = b ⌊r / q_j⌋ + ⌊b (r mod q_j) / q_j⌋
        let mut state: Vec<(u128, u128, u128)> = self
            .form
            .runs()
            .map(|(r, x)| (r % qj, x, 0u128))
            .collect();
        let whole: u128 = self.form.runs().map(|(r, x)| x * (r / qj)).sum();
        let mut out = Vec::with_capacity(qj as usize);
        let mut frac_floors = 0u128;
        let mut total = 0u128;
        out.push(0);
        for _b in 1..qj {
            total += self.per_step - whole;
            for (e, x, rem) in state.iter_mut() {
                *rem += *e;
                if *rem >= qj {
                    *rem -= qj;
                    frac_floors += *x;
                }
            }
            out.push(total - frac_floors);
        }
        out
    }

    /// `⌊b t⌋ - ⌊c t⌋ = ⌊(b - c) t⌋` for `t = r_i / q_j`, all `r_i != q_j`.
    fn additive(&self, b: u128, c: u128) -> bool {
        let qj = self.qj;
        self.residues
            .iter()
            .all(|&e| (c * e) % qj + ((b - c) * e) % qj < qj)
    }
}

/// Left-hand side of the height condition for the entry at 0-based
/// position `j` and `1 <= b < q_j` (`b = 0` gives 0).
pub fn height_count(q: &WeightVector, j: u128, b: u128) -> Result<u128> {
    let qj = q
        .get(j)
        .ok_or_else(|| Error::domain(format!("index {j} out of range for n = {}", q.len())))?;
    if qj == 1 {
        return Err(Error::domain("q_j = 1 has an empty b-range"));
    }
    if b >= qj {
        return Err(Error::domain(format!("b = {b} must be below q_j = {qj}")));
    }
    FacetScan::new(q, qj)?.height(b)
}

/// First `(j, b)` without a decomposing `c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct IdpWitness {
    /// 0-based position of the first entry equal to `value`.
    pub j: u128,
    pub value: u128,
    pub b: u128,
    pub height: u128,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdpReport {
    pub is_reflexive: bool,
    pub satisfies_necessary: bool,
    /// `None` when undetermined: `q` is not reflexive or the full test was skipped.
    pub is_idp: Option<bool>,
    pub necessary_witness: Option<NecessaryWitness>,
    pub idp_witness: Option<IdpWitness>,
}

/// Runs the full c-search for one distinct value `q_j`.
fn scan_facet(q: &WeightVector, qj: u128) -> Result<Option<(u128, u128)>> {
    if qj > IDP_SCAN_CAP {
        return Err(Error::Budget {
            what: format!("IDP scan over b < {qj}"),
            cap: IDP_SCAN_CAP,
        });
    }
    let scan = FacetScan::new(q, qj)?;
    let heights = scan.heights();
    for b in 1..qj {
        let hb = heights[b as usize];
        if hb < 2 {
            continue;
        }
        let found = (1..b).any(|c| heights[c as usize] == 1 && scan.additive(b, c));
        if !found {
            return Ok(Some((b, hb)));
        }
    }
    Ok(None)
}

/// Full IDP test; reflexivity and the necessary condition are reported too.
pub fn is_idp(q: &WeightVector) -> Result<IdpReport> {
    let reflexive = is_reflexive(q);
    let (necessary, necessary_witness) = satisfies_necessary_condition(q);
    if !reflexive {
        return Ok(IdpReport {
            is_reflexive: false,
            satisfies_necessary: necessary,
            is_idp: None,
            necessary_witness,
            idp_witness: None,
        });
    }
    let mut idp_witness = None;
    for (k, &qj) in q.support_form().support().iter().enumerate() {
        if let Some((b, height)) = scan_facet(q, qj)? {
            idp_witness = Some(IdpWitness {
                j: q.run_start(k),
                value: qj,
                b,
                height,
            });
            break;
        }
    }
    Ok(IdpReport {
        is_reflexive: true,
        satisfies_necessary: necessary,
        is_idp: Some(idp_witness.is_none()),
        necessary_witness,
        idp_witness,
    })
}

/// Report with only reflexivity and the necessary condition evaluated.
pub fn necessary_report(q: &WeightVector) -> IdpReport {
    let (necessary, necessary_witness) = satisfies_necessary_condition(q);
    IdpReport {
        is_reflexive: is_reflexive(q),
        satisfies_necessary: necessary,
        is_idp: None,
        necessary_witness,
        idp_witness: None,
    }
}

/// Shorthand: `Some(true/false)` for reflexive `q`, `None` otherwise.
pub fn idp_verdict(q: &WeightVector) -> Result<Option<bool>> {
    Ok(is_idp(q)?.is_idp)
}
