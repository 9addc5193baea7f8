//! Enumeration experiments: `V(M)`, `un(M)` and the IDP census over
//! distinct-part r-vectors.
//!
//! Work is sharded by the largest part (exact sweeps) or by r-vector (IDP
//! census) and merged by addition, so records do not depend on the number
//! of workers.

pub mod partitions;

use num_integer::Integer;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::ehrhart::{h_star_small, is_unimodal};
use crate::error::{Error, Result};
use crate::reflexive_idp::{is_idp, is_reflexive, satisfies_necessary_condition};
use crate::weights::WeightVector;

pub use partitions::{enumerate_partitions, for_each_partition, PartitionCounts};

pub const UN_SCHEMA: &str = "wps.census.un/1";
pub const IDP_SCHEMA: &str = "wps.census.idp/1";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Largest `|V(M)|` an exact sweep will take on.
pub const EXACT_CAP: u128 = 1 << 32;
/// Largest number of multiplicity vectors in one bounds box.
pub const BOX_CAP: u128 = 1 << 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Sampled,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::Sampled => "sampled",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CensusRecord {
    pub schema: String,
    pub version: String,
    #[serde(rename = "M")]
    pub m: u128,
    pub mode: Mode,
    /// `|V(M)| = p(M-1)`.
    pub count_simplices: u128,
    /// Simplices actually evaluated: all of `V(M)`, or the sample.
    pub evaluated: u128,
    pub count_unimodal: u128,
    pub count_reflexive: u128,
    /// Reflexive and IDP.
    pub count_idp: u128,
    /// `count_unimodal / evaluated` in lowest terms.
    pub un_exact: String,
    pub un_fraction: f64,
    pub sample_size: Option<u128>,
    pub seed: Option<u64>,
    /// 95% Wald half-width, sampled mode only.
    pub ci_half_width: Option<f64>,
    pub ms: Option<u64>,
}

impl CensusRecord {
    pub fn ci(&self) -> Option<(f64, f64)> {
        self.ci_half_width
            .map(|h| (self.un_fraction - h, self.un_fraction + h))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
struct Tally {
    evaluated: u128,
    unimodal: u128,
    reflexive: u128,
    idp: u128,
}

impl std::ops::Add for Tally {
    type Output = Tally;
    fn add(self, o: Tally) -> Tally {
        Tally {
            evaluated: self.evaluated + o.evaluated,
            unimodal: self.unimodal + o.unimodal,
            reflexive: self.reflexive + o.reflexive,
            idp: self.idp + o.idp,
        }
    }
}

fn tally_one(parts: &[u128], counts: &mut Vec<u32>) -> Result<Tally> {
    let q = WeightVector::new(parts.to_vec())?;
    h_star_small(&q, counts);
    let reflexive = is_reflexive(&q);
    let idp = reflexive && is_idp(&q)?.is_idp == Some(true);
    Ok(Tally {
        evaluated: 1,
        unimodal: is_unimodal(counts) as u128,
        reflexive: reflexive as u128,
        idp: idp as u128,
    })
}

fn fraction(num: u128, den: u128) -> (String, f64) {
    let g = num.gcd(&den).max(1);
    (format!("{}/{}", num / g, den / g), num as f64 / den as f64)
}

fn record(m: u128, mode: Mode, population: u128, t: Tally) -> CensusRecord {
    let (un_exact, un_fraction) = fraction(t.unimodal, t.evaluated);
    CensusRecord {
        schema: UN_SCHEMA.to_string(),
        version: VERSION.to_string(),
        m,
        mode,
        count_simplices: population,
        evaluated: t.evaluated,
        count_unimodal: t.unimodal,
        count_reflexive: t.reflexive,
        count_idp: t.idp,
        un_exact,
        un_fraction,
        sample_size: None,
        seed: None,
        ci_half_width: None,
        ms: None,
    }
}

/// `|V(M)| = p(M - 1)`.
pub fn simplex_count(m: u128) -> Result<u128> {
    if m < 2 {
        return Err(Error::InvalidParams("M must be at least 2".into()));
    }
    Ok(PartitionCounts::new(m - 1)?.count(m - 1))
}

/// Exact `un(M)` over every partition of `M - 1`.
pub fn un_exact(m: u128) -> Result<CensusRecord> {
    un_exact_with_cap(m, EXACT_CAP)
}

pub fn un_exact_with_cap(m: u128, cap: u128) -> Result<CensusRecord> {
    let population = simplex_count(m)?;
    if population > cap {
        return Err(Error::Budget {
            what: format!("exact un({m}) over {population} simplices; use sampling"),
            cap,
        });
    }
    let total = m - 1;
    let t = (1..=total)
        .into_par_iter()
        .map(|largest| {
            let mut counts = Vec::new();
            let mut acc = Tally::default();
            let mut err = None;
            partitions::for_each_with_largest(total, largest, false, |p| {
                if err.is_none() {
                    match tally_one(p, &mut counts) {
                        Ok(t) => acc = acc + t,
                        Err(e) => err = Some(e),
                    }
                }
            });
            err.map_or(Ok(acc), Err)
        })
        .try_reduce(Tally::default, |a, b| Ok(a + b))?;
    debug_assert_eq!(t.evaluated, population);
    Ok(record(m, Mode::Exact, population, t))
}

/// Sampled `un(M)` from `sample_size` uniform partitions of `M - 1`.
pub fn un_sampled(m: u128, sample_size: u128, seed: u64) -> Result<CensusRecord> {
    if sample_size == 0 {
        return Err(Error::InvalidParams("sample size must be positive".into()));
    }
    if m < 2 {
        return Err(Error::InvalidParams("M must be at least 2".into()));
    }
    let table = PartitionCounts::new(m - 1)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // Draw sequentially so the sample is independent of the worker count.
    let samples: Vec<Vec<u128>> = (0..sample_size).map(|_| table.sample(m - 1, &mut rng)).collect();
    let t = samples
        .par_iter()
        .map_init(Vec::new, |counts, p| tally_one(p, counts))
        .try_reduce(Tally::default, |a, b| Ok(a + b))?;
    let mut rec = record(m, Mode::Sampled, table.count(m - 1), t);
    let p = rec.un_fraction;
    rec.sample_size = Some(sample_size);
    rec.seed = Some(seed);
    rec.ci_half_width = Some(1.96 * (p * (1.0 - p) / sample_size as f64).sqrt());
    Ok(rec)
}

/// One `M` of the IDP census.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdpCensusRow {
    #[serde(rename = "M")]
    pub m: u128,
    /// Distinct-part partitions of `M` with some `r_j ∤ r_d`.
    pub r_vectors: u128,
    /// Multiplicity vectors inside the bounds boxes.
    pub box_points: u128,
    pub reflexive: u128,
    pub necessary: u128,
    pub idp: u128,
    /// The reflexive IDP vectors found, in r-vector order.
    pub idp_vectors: Vec<WeightVector>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdpCensusRecord {
    pub schema: String,
    pub version: String,
    #[serde(rename = "M_max")]
    pub m_max: u128,
    pub count_r_vectors: u128,
    pub count_idp_reflexives: u128,
    pub rows: Vec<IdpCensusRow>,
}

impl IdpCensusRecord {
    fn empty() -> Self {
        Self {
            schema: IDP_SCHEMA.to_string(),
            version: VERSION.to_string(),
            m_max: 0,
            count_r_vectors: 0,
            count_idp_reflexives: 0,
            rows: Vec::new(),
        }
    }

    fn push(&mut self, row: IdpCensusRow) {
        self.m_max = row.m;
        self.count_r_vectors += row.r_vectors;
        self.count_idp_reflexives += row.idp;
        self.rows.push(row);
    }

    /// Checks the schema, row contiguity from `M = 1`, and that rows add up
    /// to the totals.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::parse("census checkpoint", msg));
        if self.schema != IDP_SCHEMA {
            return bad("unknown schema");
        }
        let mut r = 0u128;
        let mut idp = 0u128;
        for (k, row) in self.rows.iter().enumerate() {
            if row.m != k as u128 + 1 {
                return bad("rows must cover M = 1, 2, ... without gaps");
            }
            if row.idp != row.idp_vectors.len() as u128
                || row.idp > row.necessary
                || row.necessary > row.reflexive
                || row.reflexive > row.box_points
            {
                return bad("row counts are inconsistent");
            }
            r = r.checked_add(row.r_vectors).ok_or(Error::Overflow("checkpoint"))?;
            idp = idp.checked_add(row.idp).ok_or(Error::Overflow("checkpoint"))?;
        }
        if self.m_max != self.rows.len() as u128 || r != self.count_r_vectors || idp != self.count_idp_reflexives {
            return bad("totals do not match rows");
        }
        Ok(())
    }

    /// The prefix of this record covering `M <= m_max`.
    pub fn truncated(mut self, m_max: u128) -> Self {
        if self.m_max > m_max {
            let rows = std::mem::take(&mut self.rows);
            self = Self::empty();
            rows.into_iter().take(m_max as usize).for_each(|r| self.push(r));
        }
        self
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let rec: Self = serde_json::from_str(text)
            .map_err(|e| Error::parse("census checkpoint", e.to_string()))?;
        rec.validate()?;
        Ok(rec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("census record serializes")
    }
}

/// `r_j ∤ r_d` for some `j < d`.
pub fn qualifies(r: &[u128]) -> bool {
    match r.split_last() {
        Some((&last, rest)) => rest.iter().any(|&rj| last % rj != 0),
        None => false,
    }
}

/// Upper bounds of the multiplicity box for a qualifying support `r`.
pub fn multiplicity_box(r: &[u128]) -> Vec<u128> {
    let d = r.len();
    let last = r[d - 1];
    let mut bounds: Vec<u128> = r.windows(2).map(|w| w[1] / w[0]).collect();
    let top = r[..d - 1]
        .iter()
        .filter(|&&rj| last % rj != 0)
        .map(|&rj| rj / (last % rj))
        .min()
        .unwrap_or(0);
    bounds.push(top);
    bounds
}

fn census_r(r: &[u128], row: &mut IdpCensusRow) -> Result<()> {
    let bounds = multiplicity_box(r);
    let volume_box = bounds
        .iter()
        .try_fold(1u128, |acc, &b| acc.checked_mul(b))
        .unwrap_or(u128::MAX);
    if volume_box > BOX_CAP {
        return Err(Error::Budget {
            what: format!("multiplicity box for r = {r:?}"),
            cap: BOX_CAP,
        });
    }
    let lcm = arith::lcm_all(r)?;
    let d = r.len();
    let mut x = vec![1u128; d];
    if bounds.contains(&0) {
        return Ok(());
    }
    loop {
        row.box_points += 1;
        let volume = 1 + r.iter().zip(&x).map(|(a, b)| a * b).sum::<u128>();
        if volume % lcm == 0 {
            row.reflexive += 1;
            let q = WeightVector::from_runs(r.iter().copied().zip(x.iter().copied()))?;
            if satisfies_necessary_condition(&q).0 {
                row.necessary += 1;
                if is_idp(&q)?.is_idp == Some(true) {
                    row.idp += 1;
                    row.idp_vectors.push(q);
                }
            }
        }
        // Odometer over the box, last coordinate fastest.
        let mut k = d;
        loop {
            if k == 0 {
                return Ok(());
            }
            k -= 1;
            if x[k] < bounds[k] {
                x[k] += 1;
                break;
            }
            x[k] = 1;
        }
    }
}

/// Census row for a single `M`.
pub fn idp_census_row(m: u128) -> Result<IdpCensusRow> {
    let supports: Vec<Vec<u128>> = enumerate_partitions(m, true)
        .into_iter()
        .filter(|r| qualifies(r))
        .collect();
    let parts = supports
        .par_iter()
        .map(|r| {
            let mut row = IdpCensusRow::default();
            census_r(r, &mut row).map(|_| row)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut row = IdpCensusRow {
        m,
        r_vectors: supports.len() as u128,
        ..Default::default()
    };
    for p in parts {
        row.box_points += p.box_points;
        row.reflexive += p.reflexive;
        row.necessary += p.necessary;
        row.idp += p.idp;
        row.idp_vectors.extend(p.idp_vectors);
    }
    Ok(row)
}

/// Census over all qualifying r-vectors with `Σ r ≤ M_max`.
pub fn idp_census(m_max: u128) -> Result<IdpCensusRecord> {
    idp_census_resume(m_max, None, |_| Ok(()))
}

/// Continues from `resume` (if any), calling `checkpoint` after every `M`.
pub fn idp_census_resume(
    m_max: u128,
    resume: Option<IdpCensusRecord>,
    mut checkpoint: impl FnMut(&IdpCensusRecord) -> Result<()>,
) -> Result<IdpCensusRecord> {
    if m_max < 3 {
        return Err(Error::InvalidParams("M_max must be at least 3".into()));
    }
    let mut rec = match resume {
        Some(r) => {
            r.validate()?;
            r
        }
        None => IdpCensusRecord::empty(),
    };
    if rec.m_max > m_max {
        return Err(Error::InvalidParams(format!(
            "checkpoint already covers M = {} > {m_max}",
            rec.m_max
        )));
    }
    for m in rec.m_max + 1..=m_max {
        rec.push(idp_census_row(m)?);
        checkpoint(&rec)?;
    }
    Ok(rec)
}
