//! Brute-force lattice geometry of `cone(Δ(1,q)) ⊂ R^{n+1}`.
//!
//! Points are written `(height; y_1, ..., y_n)`. The cone is simplicial with
//! ray generators `(1; e_i)` and `(1; -q)`, so every lattice point is
//! uniquely a fundamental-parallelepiped point plus a nonnegative integer
//! combination of the rays. This module is deliberately independent of the
//! number-theoretic IDP test: it only uses the weight function to index the
//! parallelepiped and exact cone membership.

use rayon::prelude::*;
use serde::Serialize;

use crate::ehrhart::weight;
use crate::error::{Error, Result};
use crate::weights::WeightVector;

/// Default cap on enumerated points / candidate pairs.
pub const DEFAULT_POINT_CAP: u128 = 10_000_000;

/// Default height budget for [`lattice_points_at_height`].
pub const DEFAULT_HEIGHT_BUDGET: u128 = 4;

/// Largest dimension the oracle will materialize.
pub const MAX_ORACLE_DIM: u128 = 4096;

/// Integer point of `cone(Δ(1,q))`. Orders by height, then coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ConePoint {
    pub height: u128,
    pub coords: Vec<i128>,
}

impl ConePoint {
    pub fn origin(n: usize) -> Self {
        Self {
            height: 0,
            coords: vec![0; n],
        }
    }

    fn sub(&self, other: &ConePoint) -> Option<ConePoint> {
        let height = self.height.checked_sub(other.height)?;
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a - b)
            .collect();
        Some(ConePoint { height, coords })
    }

    /// Row form `height, y_1, ..., y_n`.
    pub fn to_row(&self) -> Vec<i128> {
        std::iter::once(self.height as i128)
            .chain(self.coords.iter().copied())
            .collect()
    }
}

fn dim(q: &WeightVector) -> Result<usize> {
    if q.len() > MAX_ORACLE_DIM {
        return Err(Error::Budget {
            what: format!("cone oracle in dimension {}", q.len()),
            cap: MAX_ORACLE_DIM,
        });
    }
    Ok(q.len() as usize)
}

fn entries_i128(q: &WeightVector) -> Result<Vec<i128>> {
    q.iter()
        .map(|v| i128::try_from(v).map_err(|_| Error::Overflow("cone coordinates")))
        .collect()
}

/// Exact membership: `λ_0 = (h - Σ y_i) / N` and `λ_i = y_i + λ_0 q_i` must
/// all be nonnegative (checked after scaling by `N`).
pub fn in_cone(q: &WeightVector, point: &ConePoint) -> Result<bool> {
    let entries = entries_i128(q)?;
    in_cone_with(&entries, point)
}

fn in_cone_with(entries: &[i128], point: &ConePoint) -> Result<bool> {
    let overflow = || Error::Overflow("cone membership");
    if point.coords.len() != entries.len() {
        return Err(Error::domain("point dimension does not match q"));
    }
    let volume: i128 = entries
        .iter()
        .try_fold(1i128, |acc, &e| acc.checked_add(e))
        .ok_or_else(overflow)?;
    let height = i128::try_from(point.height).map_err(|_| overflow())?;
    let coord_sum = point
        .coords
        .iter()
        .try_fold(0i128, |acc, &y| acc.checked_add(y))
        .ok_or_else(overflow)?;
    let lambda0 = height.checked_sub(coord_sum).ok_or_else(overflow)?;
    if lambda0 < 0 {
        return Ok(false);
    }
    for (&y, &qi) in point.coords.iter().zip(entries) {
        let scaled = y
            .checked_mul(volume)
            .and_then(|v| v.checked_add(lambda0.checked_mul(qi)?))
            .ok_or_else(overflow)?;
        if scaled < 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The `n + 1` ray generators `(1; e_i)` and `(1; -q)`, i.e. the vertices
/// of `Δ(1,q)` at height 1.
pub fn ray_generators(q: &WeightVector) -> Result<Vec<ConePoint>> {
    let n = dim(q)?;
    let entries = entries_i128(q)?;
    let mut rays: Vec<ConePoint> = (0..n)
        .map(|i| {
            let mut coords = vec![0; n];
            coords[i] = 1;
            ConePoint { height: 1, coords }
        })
        .collect();
    rays.push(ConePoint {
        height: 1,
        coords: entries.iter().map(|&e| -e).collect(),
    });
    Ok(rays)
}

/// Parallelepiped point indexed by `b`: height `w(q,b)` and
/// `y_i = -⌊q_i b / N⌋`.
pub fn fpp_point(q: &WeightVector, b: u128) -> Result<ConePoint> {
    dim(q)?;
    let height = weight(q, b)?;
    let volume = q.normalized_volume();
    let mut coords = Vec::with_capacity(q.len() as usize);
    for (r, x) in q.runs() {
        let f = r.checked_mul(b).ok_or(Error::Overflow("fpp point"))? / volume;
        let f = i128::try_from(f).map_err(|_| Error::Overflow("fpp point"))?;
        coords.extend(std::iter::repeat_n(-f, x as usize));
    }
    Ok(ConePoint { height, coords })
}

fn all_fpp_points(q: &WeightVector, cap: u128) -> Result<Vec<ConePoint>> {
    let volume = q.normalized_volume();
    if volume > cap {
        return Err(Error::Budget {
            what: format!("{volume} parallelepiped points"),
            cap,
        });
    }
    (0..volume).map(|b| fpp_point(q, b)).collect()
}

/// `C(k + n, n)`, saturating at `limit + 1`.
fn compositions(k: u128, parts: u128, limit: u128) -> u128 {
    // number of ways to write k as an ordered sum of `parts` nonnegative integers
    if parts == 0 {
        return u128::from(k == 0);
    }
    let n = parts - 1;
    let mut acc: u128 = 1;
    for i in 1..=k {
        acc = match acc.checked_mul(n + i) {
            Some(v) => v / i,
            None => return limit + 1,
        };
        if acc > limit {
            return limit + 1;
        }
    }
    acc
}

fn push_compositions(
    base: &ConePoint,
    rays: &[ConePoint],
    remaining: u128,
    start: usize,
    out: &mut Vec<ConePoint>,
) {
    if remaining == 0 {
        out.push(base.clone());
        return;
    }
    for k in start..rays.len() {
        let mut next = base.clone();
        next.height += 1;
        for (c, r) in next.coords.iter_mut().zip(&rays[k].coords) {
            *c += r;
        }
        push_compositions(&next, rays, remaining - 1, k, out);
    }
}

/// All lattice points of the cone at height `t`, sorted.
pub fn lattice_points_at_height(
    q: &WeightVector,
    t: u128,
    height_budget: u128,
    cap: u128,
) -> Result<Vec<ConePoint>> {
    if t > height_budget {
        return Err(Error::Budget {
            what: format!("height {t} enumeration"),
            cap: height_budget,
        });
    }
    let n = dim(q)?;
    let fpp = all_fpp_points(q, cap)?;
    let parts = n as u128 + 1;
    let mut total: u128 = 0;
    for p in fpp.iter().filter(|p| p.height <= t) {
        total = total.saturating_add(compositions(t - p.height, parts, cap));
        if total > cap {
            return Err(Error::Budget {
                what: format!("lattice points at height {t}"),
                cap,
            });
        }
    }
    let rays = ray_generators(q)?;
    let mut out = Vec::with_capacity(total as usize);
    for p in fpp.iter().filter(|p| p.height <= t) {
        push_compositions(p, &rays, t - p.height, 0, &mut out);
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Minimal generating set of `cone(Δ(1,q)) ∩ Z^{n+1}`, sorted by height and
/// then lexicographically.
///
/// Candidates are the rays and the nonzero parallelepiped points. A
/// candidate `z` of height `h >= 2` is dropped when `z - u` lies in the cone
/// for some candidate `u` of height `1..h`; testing candidates suffices
/// because any decomposition `z = u + v` can be refined until `u` is
/// irreducible, and every irreducible element is a candidate.
pub fn hilbert_basis(q: &WeightVector, cap: u128) -> Result<Vec<ConePoint>> {
    let entries = entries_i128(q)?;
    let mut candidates = ray_generators(q)?;
    candidates.extend(
        all_fpp_points(q, cap)?
            .into_iter()
            .filter(|p| p.height >= 1),
    );
    candidates.sort();
    candidates.dedup();
    let work = (candidates.len() as u128).saturating_mul(candidates.len() as u128);
    if work > cap {
        return Err(Error::Budget {
            what: format!("{} candidate pairs", work),
            cap,
        });
    }
    let keep: Vec<bool> = candidates
        .par_iter()
        .map(|z| -> Result<bool> {
            if z.height < 2 {
                return Ok(true);
            }
            for u in candidates.iter().take_while(|u| u.height < z.height) {
                let diff = z.sub(u).expect("height ordered");
                if in_cone_with(&entries, &diff)? {
                    return Ok(false);
                }
            }
            Ok(true)
        })
        .collect::<Result<_>>()?;
    Ok(candidates
        .into_iter()
        .zip(keep)
        .filter_map(|(z, k)| k.then_some(z))
        .collect())
}

/// IDP iff the Hilbert basis sits entirely at height 1.
pub fn is_idp_oracle(q: &WeightVector, cap: u128) -> Result<bool> {
    Ok(hilbert_basis(q, cap)?.iter().all(|z| z.height <= 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::parse_weights;

    fn q(s: &str) -> WeightVector {
        parse_weights(s).unwrap()
    }

    fn pt(height: u128, coords: &[i128]) -> ConePoint {
        ConePoint {
            height,
            coords: coords.to_vec(),
        }
    }

    #[test]
    fn fpp_examples() {
        assert_eq!(
            fpp_point(&q("1,1,1,6,20,30"), 21).unwrap(),
            pt(2, &[0, 0, 0, -2, -7, -10])
        );
        assert_eq!(fpp_point(&q("2,2,3"), 0).unwrap(), ConePoint::origin(3));
        assert_eq!(fpp_point(&q("1,1"), 2).unwrap(), pt(2, &[0, 0]));
        assert!(fpp_point(&q("1,1"), 3).is_err());
    }

    #[test]
    fn fpp_points_are_in_cone_and_distinct() {
        let v = q("1,2,2,4");
        let pts = all_fpp_points(&v, DEFAULT_POINT_CAP).unwrap();
        for p in &pts {
            assert!(in_cone(&v, p).unwrap());
        }
        let mut sorted = pts.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), pts.len());
    }

    #[test]
    fn membership() {
        let v = q("1,1");
        assert!(in_cone(&v, &pt(1, &[1, 0])).unwrap());
        assert!(in_cone(&v, &pt(1, &[-1, -1])).unwrap());
        assert!(in_cone(&v, &pt(0, &[0, 0])).unwrap());
        assert!(!in_cone(&v, &pt(1, &[1, 1])).unwrap());
        assert!(!in_cone(&v, &pt(1, &[-2, 0])).unwrap());
        assert!(!in_cone(&v, &pt(0, &[1, -1])).unwrap());
        assert!(in_cone(&v, &pt(1, &[0])).is_err());
    }

    #[test]
    fn points_at_height() {
        let v = q("1,1");
        let pts = lattice_points_at_height(&v, 1, 4, DEFAULT_POINT_CAP).unwrap();
        let mut expected = vec![pt(1, &[1, 0]), pt(1, &[0, 1]), pt(1, &[-1, -1]), pt(1, &[0, 0])];
        expected.sort();
        assert_eq!(pts, expected);

        let pts = lattice_points_at_height(&q("2,2,3"), 0, 4, DEFAULT_POINT_CAP).unwrap();
        assert_eq!(pts, vec![ConePoint::origin(3)]);

        assert!(lattice_points_at_height(&v, 5, 4, DEFAULT_POINT_CAP).is_err());
        assert!(matches!(
            lattice_points_at_height(&q("1,1,1,6,20,30"), 4, 4, 10),
            Err(Error::Budget { .. })
        ));
    }

    #[test]
    fn hilbert_small() {
        let v = q("1,1");
        let basis = hilbert_basis(&v, DEFAULT_POINT_CAP).unwrap();
        assert_eq!(basis.len(), 4);
        assert!(basis.iter().all(|z| z.height == 1));
        assert!(is_idp_oracle(&v, DEFAULT_POINT_CAP).unwrap());

        let v = q("1,2");
        let basis = hilbert_basis(&v, DEFAULT_POINT_CAP).unwrap();
        assert!(basis.iter().all(|z| z.height == 1));
        assert_eq!(
            basis,
            lattice_points_at_height(&v, 1, 4, DEFAULT_POINT_CAP).unwrap()
        );
        assert!(is_idp_oracle(&v, DEFAULT_POINT_CAP).unwrap());
        assert!(!is_idp_oracle(&q("1,1,1,6,20,30"), DEFAULT_POINT_CAP).unwrap());
    }

    #[test]
    fn composition_counts() {
        assert_eq!(compositions(0, 3, 100), 1);
        assert_eq!(compositions(1, 3, 100), 3);
        assert_eq!(compositions(2, 3, 100), 6);
        assert_eq!(compositions(3, 4, 100), 20);
        assert_eq!(compositions(3, 4, 10), 11);
    }
}
