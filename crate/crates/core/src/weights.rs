//! Weight vectors `q`, their support/multiplicity form `(r, x)`, and the
//! derived quantities `N(q)`, `lcm(r)`, `ell` and `s`.
//!
//! A [`WeightVector`] is stored run-length encoded, i.e. as its
//! [`SupportForm`]. Stabilized vectors routinely carry millions of leading
//! 1s, and every algorithm in this crate only needs the distinct values and
//! their multiplicities. Positions are 0-based throughout the API.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith;
use crate::error::{Error, Result};

/// Distinct support `r_1 < ... < r_d` with multiplicities `x_1, ..., x_d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SupportForm {
    support: Vec<u128>,
    multiplicity: Vec<u128>,
}

impl SupportForm {
    pub fn new(support: Vec<u128>, multiplicity: Vec<u128>) -> Result<Self> {
        if support.is_empty() {
            return Err(Error::Empty);
        }
        if support.len() != multiplicity.len() {
            return Err(Error::InvalidParams(format!(
                "support has {} entries but multiplicity has {}",
                support.len(),
                multiplicity.len()
            )));
        }
        if support.iter().chain(&multiplicity).any(|&v| v == 0) {
            return Err(Error::NonPositive);
        }
        if support.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParams(
                "support must be strictly increasing".into(),
            ));
        }
        multiplicity
            .iter()
            .try_fold(0u128, |acc, &x| arith::add(acc, x, "dimension"))?;
        Ok(Self {
            support,
            multiplicity,
        })
    }

    pub fn support(&self) -> &[u128] {
        &self.support
    }

    pub fn multiplicity(&self) -> &[u128] {
        &self.multiplicity
    }

    /// Number of distinct entries.
    pub fn d(&self) -> usize {
        self.support.len()
    }

    /// `(r_i, x_i)` pairs in increasing order of `r_i`.
    pub fn runs(&self) -> impl Iterator<Item = (u128, u128)> + '_ {
        self.support
            .iter()
            .copied()
            .zip(self.multiplicity.iter().copied())
    }
}

/// A weakly increasing vector of positive integers defining `Δ(1,q)`.
///
/// Invariants: `n >= 1`, all entries `>= 1`, and `N(q) = 1 + Σ q_i` fits in
/// a `u128`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeightVector {
    form: SupportForm,
    n: u128,
    volume: u128,
}

impl WeightVector {
    pub fn new(mut entries: Vec<u128>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Empty);
        }
        if entries.contains(&0) {
            return Err(Error::NonPositive);
        }
        entries.sort_unstable();
        let mut support = Vec::new();
        let mut multiplicity: Vec<u128> = Vec::new();
        for v in entries {
            if support.last() == Some(&v) {
                *multiplicity.last_mut().unwrap() += 1;
            } else {
                support.push(v);
                multiplicity.push(1);
            }
        }
        Self::from_support_form(SupportForm::new(support, multiplicity)?)
    }

    pub fn from_support_form(form: SupportForm) -> Result<Self> {
        let mut n = 0u128;
        let mut volume = 1u128;
        for (r, x) in form.runs() {
            n = arith::add(n, x, "dimension")?;
            volume = arith::add(volume, arith::mul(r, x, "N(q)")?, "N(q)")?;
        }
        Ok(Self { form, n, volume })
    }

    /// Builds `q` from `(value, multiplicity)` pairs in any order; equal
    /// values are merged.
    pub fn from_runs(runs: impl IntoIterator<Item = (u128, u128)>) -> Result<Self> {
        let mut runs: Vec<(u128, u128)> = runs.into_iter().filter(|&(_, x)| x > 0).collect();
        if runs.iter().any(|&(r, _)| r == 0) {
            return Err(Error::NonPositive);
        }
        runs.sort_unstable();
        let mut support: Vec<u128> = Vec::with_capacity(runs.len());
        let mut multiplicity: Vec<u128> = Vec::with_capacity(runs.len());
        for (r, x) in runs {
            if support.last() == Some(&r) {
                let last = multiplicity.last_mut().unwrap();
                *last = arith::add(*last, x, "multiplicity")?;
            } else {
                support.push(r);
                multiplicity.push(x);
            }
        }
        Self::from_support_form(SupportForm::new(support, multiplicity)?)
    }

    pub fn support_form(&self) -> &SupportForm {
        &self.form
    }

    pub fn into_support_form(self) -> SupportForm {
        self.form
    }

    /// `(q_j, multiplicity)` runs.
    pub fn runs(&self) -> impl Iterator<Item = (u128, u128)> + '_ {
        self.form.runs()
    }

    /// The dimension `n`.
    pub fn len(&self) -> u128 {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `N(q) = 1 + Σ q_i`.
    pub fn normalized_volume(&self) -> u128 {
        self.volume
    }

    pub fn max(&self) -> u128 {
        *self.form.support.last().unwrap()
    }

    pub fn min(&self) -> u128 {
        self.form.support[0]
    }

    /// Expanded entries `q_1 <= ... <= q_n`.
    pub fn iter(&self) -> impl Iterator<Item = u128> + '_ {
        self.runs()
            .flat_map(|(r, x)| std::iter::repeat(r).take(x as usize))
    }

    pub fn to_vec(&self) -> Vec<u128> {
        self.iter().collect()
    }

    /// Entry at 0-based position `idx`.
    pub fn get(&self, idx: u128) -> Option<u128> {
        self.run_of(idx).map(|k| self.form.support[k])
    }

    /// Index of the run containing position `idx`.
    pub fn run_of(&self, mut idx: u128) -> Option<usize> {
        for (k, &x) in self.form.multiplicity.iter().enumerate() {
            if idx < x {
                return Some(k);
            }
            idx -= x;
        }
        None
    }

    /// 0-based position of the first entry of run `k`.
    pub fn run_start(&self, k: usize) -> u128 {
        self.form.multiplicity[..k].iter().sum()
    }

    /// Compact text form using `^` for repeated entries, e.g. `1^7,3^4,5^5`.
    pub fn to_compact_string(&self) -> String {
        self.to_string()
    }

    /// Comma-separated expansion, e.g. `2,2,3`.
    pub fn to_expanded_string(&self) -> String {
        let parts: Vec<String> = self.iter().map(|v| v.to_string()).collect();
        parts.join(",")
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (r, x)) in self.runs().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            match x {
                1 => write!(f, "{r}")?,
                2 => write!(f, "{r},{r}")?,
                _ => write!(f, "{r}^{x}")?,
            }
        }
        Ok(())
    }
}

impl FromStr for WeightVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_weights(s)
    }
}

impl Serialize for WeightVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for WeightVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let entries = Vec::<u128>::deserialize(deserializer)?;
        WeightVector::new(entries).map_err(serde::de::Error::custom)
    }
}

fn parse_int(text: &str, full: &str) -> Result<u128> {
    let t = text.trim();
    if t.is_empty() {
        return Err(Error::parse(full, "empty entry"));
    }
    if let Some(rest) = t.strip_prefix('-') {
        if !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::NonPositive);
        }
    }
    if !t.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::parse(full, format!("{t:?} is not an integer")));
    }
    let v: u128 = t.parse().map_err(|_| Error::Overflow("parse"))?;
    if v == 0 {
        return Err(Error::NonPositive);
    }
    Ok(v)
}

/// Parses `entry(,entry)*` where `entry` is `INT` or `INT^INT`.
///
/// The result is sorted, so `"3,1,2"` and `"1,2,3"` give the same vector.
pub fn parse_weights(text: &str) -> Result<WeightVector> {
    if text.trim().is_empty() {
        return Err(Error::parse(text, "no entries"));
    }
    let mut runs = Vec::new();
    for entry in text.split(',') {
        let (value, mult) = match entry.split_once('^') {
            Some((v, m)) => (parse_int(v, text)?, parse_int(m, text)?),
            None => (parse_int(entry, text)?, 1),
        };
        runs.push((value, mult));
    }
    WeightVector::from_runs(runs)
}

/// `N(q) = 1 + Σ q_i`, the normalized volume of `Δ(1,q)`.
pub fn normalized_volume(q: &WeightVector) -> u128 {
    q.normalized_volume()
}

/// `lcm(r)`, `ell = N(q)/lcm(r)` and `s_i = lcm(r)/r_i` for a reflexive `q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReflexiveContext {
    pub lcm: u128,
    pub ell: u128,
    pub s: Vec<u128>,
}

pub fn reflexive_context(q: &WeightVector) -> Result<ReflexiveContext> {
    let lcm = arith::lcm_all(q.support_form().support())?;
    let volume = q.normalized_volume();
    if volume % lcm != 0 {
        return Err(Error::NotReflexive(q.to_string()));
    }
    let s = q.support_form().support().iter().map(|&r| lcm / r).collect();
    Ok(ReflexiveContext {
        lcm,
        ell: volume / lcm,
        s,
    })
}

/// Largest dimension for which [`one_column_hnf`] materializes the matrix.
pub const HNF_MAX_DIM: u128 = 4096;

/// Vertex matrix of `Δ(1,q) - e_1` in one-column Hermite normal form.
///
/// Returns `n` rows and `n + 1` columns: a zero column, the identity block
/// on columns `1..n-1`, and a final column `(N-q_2, ..., N-q_n, N)`.
pub fn one_column_hnf(q: &WeightVector) -> Result<Vec<Vec<u128>>> {
    let n = q.len();
    if n < 2 {
        return Err(Error::domain("one-column HNF needs n >= 2"));
    }
    if n > HNF_MAX_DIM {
        return Err(Error::Budget {
            what: "one-column HNF".into(),
            cap: HNF_MAX_DIM,
        });
    }
    let n = n as usize;
    let volume = q.normalized_volume();
    let entries = q.to_vec();
    let mut rows = vec![vec![0u128; n + 1]; n];
    for (i, row) in rows.iter_mut().enumerate().take(n - 1) {
        row[i + 1] = 1;
        row[n] = volume - entries[i + 1];
    }
    rows[n - 1][n] = volume;
    Ok(rows)
}
