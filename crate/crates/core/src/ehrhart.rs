//! h*-polynomials of `Δ(1,q)`.
//!
//! `h*(z) = Σ_{b=0}^{N-1} z^{w(q,b)}` with `w(q,b) = b - Σ ⌊q_i b / N⌋`.
//! For reflexive `q` the polynomial factors as `(1 + z + ... + z^{ell-1}) g(z)`
//! where `g(z) = Σ_{0 <= α < lcm} z^{u(α)}`, `u(α) = α ell - Σ x_i ⌊α / s_i⌋`.

use serde::Serialize;

use crate::arith;
use crate::error::{Error, Result};
use crate::weights::{reflexive_context, ReflexiveContext, SupportForm, WeightVector};

/// Largest `N(q)` (or `lcm`) for which a dense sweep is attempted.
pub const DENSE_SWEEP_CAP: u128 = 1 << 36;

/// Dense coefficient vector, index = degree, trailing zeros trimmed.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct HStarPolynomial {
    coeffs: Vec<u128>,
}

impl HStarPolynomial {
    pub fn from_coeffs(mut coeffs: Vec<u128>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[u128] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<u128> {
        self.coeffs
    }

    /// Degree of the trimmed polynomial; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Coefficient of `z^k`, zero past the degree.
    pub fn coeff(&self, k: usize) -> u128 {
        self.coeffs.get(k).copied().unwrap_or(0)
    }

    pub fn sum(&self) -> u128 {
        self.coeffs.iter().sum()
    }

    /// Schoolbook product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Ok(Self::default());
        }
        let mut out = vec![0u128; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = arith::add(out[i + j], arith::mul(a, b, "poly mul")?, "poly mul")?;
            }
        }
        Ok(Self::from_coeffs(out))
    }

    pub fn is_unimodal(&self) -> bool {
        is_unimodal(&self.coeffs)
    }

    pub fn is_palindromic(&self, n: usize) -> bool {
        is_palindromic(&self.coeffs, n)
    }
}

/// `w(q, b) = b - Σ ⌊q_i b / N(q)⌋` for `0 <= b <= Σ q_i`.
pub fn weight(q: &WeightVector, b: u128) -> Result<u128> {
    let volume = q.normalized_volume();
    if b >= volume {
        return Err(Error::domain(format!(
            "b = {b} outside 0..={} for weight",
            volume - 1
        )));
    }
    let mut floors = 0u128;
    for (r, x) in q.runs() {
        let f = arith::mul(r, b, "weight")? / volume;
        floors = arith::add(floors, arith::mul(x, f, "weight")?, "weight")?;
    }
    Ok(b - floors)
}

/// Calls `visit(w(q,b))` for every `b` in `0..N` without divisions in the
/// inner loop: each `⌊r b / N⌋` is advanced by its remainder. Callers keep
/// `N <= DENSE_SWEEP_CAP`, so everything fits in `u64`.
fn sweep_weights(form: &SupportForm, volume: u128, mut visit: impl FnMut(u64)) {
    debug_assert!(volume <= DENSE_SWEEP_CAP);
    let volume = volume as u64;
    let mut state: Vec<(u64, u64, u64)> = form
        .runs()
        .map(|(r, x)| (r as u64, x as u64, 0u64))
        .collect();
    let mut floors = 0u64;
    visit(0);
    for b in 1..volume {
        // r < N, so each step carries at most once.
        for (r, x, rem) in state.iter_mut() {
            *rem += *r;
            if *rem >= volume {
                *rem -= volume;
                floors += *x;
            }
        }
        visit(b - floors);
    }
}

fn check_sweep(what: &str, len: u128) -> Result<()> {
    if len > DENSE_SWEEP_CAP {
        return Err(Error::Budget {
            what: what.to_string(),
            cap: DENSE_SWEEP_CAP,
        });
    }
    Ok(())
}

/// `h*(Δ(1,q); z)` by counting `b` by weight.
pub fn h_star(q: &WeightVector) -> Result<HStarPolynomial> {
    let volume = q.normalized_volume();
    check_sweep("h* sweep", volume)?;
    // w(q,b) <= n, and n < N.
    let mut counts = vec![0u128; (q.len() + 1) as usize];
    sweep_weights(q.support_form(), volume, |w| counts[w as usize] += 1);
    Ok(HStarPolynomial::from_coeffs(counts))
}

/// Same as [`h_star`] but with `u32` counters; for the census hot loop.
pub(crate) fn h_star_small(q: &WeightVector, counts: &mut Vec<u32>) {
    let volume = q.normalized_volume();
    counts.clear();
    counts.resize((q.len() + 1) as usize, 0);
    sweep_weights(q.support_form(), volume, |w| counts[w as usize] += 1);
    while counts.last() == Some(&0) {
        counts.pop();
    }
}

/// Calls `visit(u(α))` for `α` in `0..lcm`.
fn sweep_u(form: &SupportForm, ctx: &ReflexiveContext, mut visit: impl FnMut(u128)) {
    // ⌊α / s_i⌋ advances by one every s_i steps.
    let mut state: Vec<(u128, u128, u128)> = form
        .multiplicity()
        .iter()
        .zip(&ctx.s)
        .map(|(&x, &s)| (s, x, 0u128))
        .collect();
    let mut floors = 0u128;
    let mut alpha_ell = 0u128;
    for _alpha in 0..ctx.lcm {
        visit(alpha_ell - floors);
        alpha_ell += ctx.ell;
        for (s, x, rem) in state.iter_mut() {
            *rem += 1;
            if *rem == *s {
                *rem = 0;
                floors += *x;
            }
        }
    }
}

/// The factor `g_r^x(z)` of a reflexive `q`.
pub fn g_poly(form: &SupportForm, ctx: &ReflexiveContext) -> Result<HStarPolynomial> {
    check_sweep("g-polynomial sweep", ctx.lcm)?;
    let mut top = 0u128;
    sweep_u(form, ctx, |u| top = top.max(u));
    let mut counts = vec![0u128; top as usize + 1];
    sweep_u(form, ctx, |u| counts[u as usize] += 1);
    Ok(HStarPolynomial::from_coeffs(counts))
}

/// `1 + z + ... + z^{len-1}`.
pub fn geometric_series(len: u128) -> HStarPolynomial {
    HStarPolynomial::from_coeffs(vec![1; len as usize])
}

/// Checks `h*(q) = (Σ_{t<ell} z^t) · g(z)` by explicit multiplication.
pub fn factorization_holds(q: &WeightVector) -> Result<bool> {
    let ctx = reflexive_context(q)?;
    let g = g_poly(q.support_form(), &ctx)?;
    let product = geometric_series(ctx.ell).mul(&g)?;
    Ok(product == h_star(q)?)
}

/// Weakly increasing up to some peak, weakly decreasing after it.
pub fn is_unimodal<T: PartialOrd>(coeffs: &[T]) -> bool {
    let mut i = 1;
    while i < coeffs.len() && coeffs[i - 1] <= coeffs[i] {
        i += 1;
    }
    while i < coeffs.len() && coeffs[i - 1] >= coeffs[i] {
        i += 1;
    }
    i >= coeffs.len()
}

/// `coeffs[i] == coeffs[n - i]` for `0 <= i <= n`, treating missing
/// coefficients as zero. Symmetry is about `n/2`, not about the degree.
pub fn is_palindromic<T: PartialEq + Default + Copy>(coeffs: &[T], n: usize) -> bool {
    if coeffs.len() > n + 1 {
        return false;
    }
    let at = |k: usize| coeffs.get(k).copied().unwrap_or_default();
    (0..=n / 2).all(|i| at(i) == at(n - i))
}

/// Run-length coefficient sequence `[(value, length), ...]` covering
/// degrees `0..=degree`, adjacent runs having distinct values.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoefficientRuns {
    runs: Vec<(u128, u128)>,
}

impl CoefficientRuns {
    fn push(&mut self, value: u128, len: u128) {
        if len == 0 {
            return;
        }
        match self.runs.last_mut() {
            Some((v, l)) if *v == value => *l += len,
            _ => self.runs.push((value, len)),
        }
    }

    fn trim(&mut self) {
        while matches!(self.runs.last(), Some((0, _))) {
            self.runs.pop();
        }
    }

    pub fn runs(&self) -> &[(u128, u128)] {
        &self.runs
    }

    pub fn len(&self) -> u128 {
        self.runs.iter().map(|&(_, l)| l).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }

    pub fn sum(&self) -> u128 {
        self.runs.iter().map(|&(v, l)| v * l).sum()
    }

    pub fn is_unimodal(&self) -> bool {
        let values: Vec<u128> = self.runs.iter().map(|&(v, _)| v).collect();
        is_unimodal(&values)
    }

    pub fn values_within(&self, allowed: &[u128]) -> bool {
        self.runs.iter().all(|(v, _)| allowed.contains(v))
    }

    /// Coefficient of `z^k`.
    pub fn coeff(&self, mut k: u128) -> u128 {
        for &(v, l) in &self.runs {
            if k < l {
                return v;
            }
            k -= l;
        }
        0
    }

    pub fn to_dense(&self) -> Result<HStarPolynomial> {
        let len = self.len();
        check_sweep("dense expansion", len)?;
        let mut out = Vec::with_capacity(len as usize);
        for &(v, l) in &self.runs {
            out.extend(std::iter::repeat_n(v, l as usize));
        }
        Ok(HStarPolynomial::from_coeffs(out))
    }
}

/// h* of a reflexive `q` in run-length form, built from the factorization:
/// each `α < lcm` contributes the block `z^{u(α)} .. z^{u(α)+ell-1}`.
/// Cost is `O(lcm log lcm)` independent of `ell`, so it handles
/// stabilizations whose dimension is far beyond a dense sweep.
pub fn h_star_runs(q: &WeightVector) -> Result<CoefficientRuns> {
    let ctx = reflexive_context(q)?;
    check_sweep("h* run sweep", ctx.lcm)?;
    let mut events: Vec<(u128, i64)> = Vec::with_capacity(2 * ctx.lcm as usize);
    let mut overflow = false;
    sweep_u(q.support_form(), &ctx, |u| {
        events.push((u, 1));
        match u.checked_add(ctx.ell) {
            Some(end) => events.push((end, -1)),
            None => overflow = true,
        }
    });
    if overflow {
        return Err(Error::Overflow("h* runs"));
    }
    events.sort_unstable();
    let mut out = CoefficientRuns { runs: Vec::new() };
    let mut level: i64 = 0;
    let mut pos = 0u128;
    let mut i = 0;
    while i < events.len() {
        let at = events[i].0;
        out.push(level as u128, at - pos);
        while i < events.len() && events[i].0 == at {
            level += events[i].1;
            i += 1;
        }
        pos = at;
    }
    out.trim();
    Ok(out)
}
