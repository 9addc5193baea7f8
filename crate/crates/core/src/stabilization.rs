//! Reflexive stabilization: prepending 1s until `Δ(1,q)` is reflexive.

use serde::Serialize;

use crate::arith;
use crate::ehrhart::{h_star, h_star_runs, weight, HStarPolynomial};
use crate::error::{Error, Result};
use crate::weights::WeightVector;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StabilizationResult {
    /// `q` without its 1-entries; `None` when `q` is all ones.
    pub base: Option<WeightVector>,
    /// Number of 1-entries already present in `q`.
    pub stripped_ones: u128,
    /// `rsn(q)`: the least number of 1s to prepend to `q` itself.
    pub rsn: u128,
    /// `rsn(base)`.
    pub base_rsn: u128,
    pub lcm: u128,
    pub requested_m: u128,
    /// The `m'` with `rs(q, m) = rs(base, m')`.
    pub m: u128,
    pub stabilized: WeightVector,
}

impl StabilizationResult {
    /// Number of 1-entries in the stabilized vector.
    pub fn ones(&self) -> u128 {
        self.stabilized
            .runs()
            .next()
            .filter(|&(r, _)| r == 1)
            .map_or(0, |(_, x)| x)
    }
}

fn split_ones(q: &WeightVector) -> Result<(u128, Option<WeightVector>)> {
    let mut runs = q.runs().peekable();
    let ones = match runs.peek() {
        Some(&(1, x)) => {
            runs.next();
            x
        }
        _ => 0,
    };
    let rest: Vec<_> = runs.collect();
    let base = if rest.is_empty() {
        None
    } else {
        Some(WeightVector::from_runs(rest)?)
    };
    Ok((ones, base))
}

/// `rs(q, m)`.
pub fn stabilize(q: &WeightVector, m: u128) -> Result<StabilizationResult> {
    if m == 0 {
        return Err(Error::InvalidParams("m must be at least 1".into()));
    }
    let (ones, base) = split_ones(q)?;
    let (lcm, base_sum) = match &base {
        Some(b) => (
            arith::lcm_all(b.support_form().support())?,
            b.normalized_volume() - 1,
        ),
        None => (1, 0),
    };
    // Least k >= 0 with lcm | 1 + k + Σ q'_i.
    let base_rsn = (lcm - (1 + base_sum % lcm) % lcm) % lcm;
    let rsn = (base_rsn + lcm - ones % lcm) % lcm;
    let extra = arith::mul(m - 1, lcm, "stabilization")?;
    let total_ones = arith::add(arith::add(ones, rsn, "stabilization")?, extra, "stabilization")?;
    let effective_m = (total_ones - base_rsn) / lcm + 1;
    let runs = std::iter::once((1u128, total_ones))
        .filter(|&(_, x)| x > 0)
        .chain(base.iter().flat_map(|b| b.runs()));
    let stabilized = WeightVector::from_runs(runs.collect::<Vec<_>>())?;
    Ok(StabilizationResult {
        base,
        stripped_ones: ones,
        rsn,
        base_rsn,
        lcm,
        requested_m: m,
        m: effective_m,
        stabilized,
    })
}

/// Shape of `h*(rs(q, m))` next to the sufficient threshold from the proof
/// that large stabilizations are not unimodal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShapeReport {
    pub m: u128,
    pub ell: u128,
    /// `(Σ x_i) · lcm(r)` over the base support.
    pub bound: u128,
    pub coeffs_only_1_2: bool,
    pub unimodal: bool,
    /// `ell(m) - 1 > (Σ x_i) · lcm(r)`.
    pub threshold_met: bool,
}

fn base_of(q: &WeightVector) -> Result<WeightVector> {
    split_ones(q)?
        .1
        .ok_or_else(|| Error::domain("stabilization shape needs an entry >= 2"))
}

fn threshold_bound(base: &WeightVector) -> Result<u128> {
    let lcm = arith::lcm_all(base.support_form().support())?;
    arith::mul(base.len(), lcm, "threshold")
}

pub fn check_large_m_shape(q: &WeightVector, m: u128) -> Result<ShapeReport> {
    let base = base_of(q)?;
    let bound = threshold_bound(&base)?;
    let st = stabilize(&base, m)?;
    let ell = st.stabilized.normalized_volume() / st.lcm;
    let runs = h_star_runs(&st.stabilized)?;
    Ok(ShapeReport {
        m,
        ell,
        bound,
        coeffs_only_1_2: runs.values_within(&[1, 2]),
        unimodal: runs.is_unimodal(),
        threshold_met: ell - 1 > bound,
    })
}

/// Least `m` for which [`ShapeReport::threshold_met`] holds.
pub fn threshold_m(q: &WeightVector) -> Result<u128> {
    let base = base_of(q)?;
    let bound = threshold_bound(&base)?;
    let st = stabilize(&base, 1)?;
    let ell1 = st.stabilized.normalized_volume() / st.lcm;
    // ell(m) = ell(1) + m - 1, so we need ell(1) + m - 2 > bound.
    let need = arith::add(bound, 3, "threshold")?;
    Ok(need.saturating_sub(ell1).max(1))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LcmMinusOneRecord {
    pub q: WeightVector,
    pub stabilized: WeightVector,
    pub h_star_q: HStarPolynomial,
    pub h_star_stabilized: HStarPolynomial,
    /// `h*(rs(q)) - h*(q) = z^{n+1}`.
    pub differs_by_top_monomial: bool,
    /// `w(q, b) = w(rs(q), b)` for `0 <= b <= Σ q_i`.
    pub weights_agree: bool,
}

/// The case `rsn(q) = 1`, `ell(rs(q)) = 1`; `None` when it does not apply.
pub fn lcm_minus_one_case(q: &WeightVector) -> Result<Option<LcmMinusOneRecord>> {
    let st = stabilize(q, 1)?;
    if st.rsn != 1 || st.stabilized.normalized_volume() != st.lcm {
        return Ok(None);
    }
    let hq = h_star(q)?;
    let hs = h_star(&st.stabilized)?;
    let top = q.len() as usize + 1;
    let mut expected = hq.coeffs().to_vec();
    expected.resize(expected.len().max(top + 1), 0);
    expected[top] += 1;
    let differs = HStarPolynomial::from_coeffs(expected) == hs;
    let mut agree = true;
    for b in 0..q.normalized_volume() {
        if weight(q, b)? != weight(&st.stabilized, b)? {
            agree = false;
            break;
        }
    }
    Ok(Some(LcmMinusOneRecord {
        q: q.clone(),
        stabilized: st.stabilized,
        h_star_q: hq,
        h_star_stabilized: hs,
        differs_by_top_monomial: differs,
        weights_agree: agree,
    }))
}
