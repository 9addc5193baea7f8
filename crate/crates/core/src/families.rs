//! Generators for the classified IDP reflexive families, the affine free
//! sum, and the two boundary families.
//!
//! Every generator substitutes the closed form for `(r, x)` literally and
//! then canonicalizes. Output that is not reflexive is rejected rather than
//! returned.

use std::fmt;
use std::ops::{Add, Mul};
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::reflexive_idp::is_reflexive;
use crate::weights::{SupportForm, WeightVector};

/// Checked `u128` expression; `None` once anything overflowed.
#[derive(Clone, Copy, Debug)]
struct Ck(Option<u128>);

const ONE: Ck = Ck(Some(1));

fn ck(v: u128) -> Ck {
    Ck(Some(v))
}

impl Add for Ck {
    type Output = Ck;
    fn add(self, rhs: Ck) -> Ck {
        Ck(self.0.zip(rhs.0).and_then(|(a, b)| a.checked_add(b)))
    }
}

impl Mul for Ck {
    type Output = Ck;
    fn mul(self, rhs: Ck) -> Ck {
        Ck(self.0.zip(rhs.0).and_then(|(a, b)| a.checked_mul(b)))
    }
}

impl Ck {
    fn get(self) -> Result<u128> {
        self.0.ok_or(Error::Overflow("family generator"))
    }
}

/// The eight 3-supported types.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ThreeType {
    I,
    Ii,
    Iii,
    Iv,
    V,
    Vi,
    Vii,
    Viii,
}

impl ThreeType {
    pub const ALL: [ThreeType; 8] = [
        ThreeType::I,
        ThreeType::Ii,
        ThreeType::Iii,
        ThreeType::Iv,
        ThreeType::V,
        ThreeType::Vi,
        ThreeType::Vii,
        ThreeType::Viii,
    ];

    /// The seven types parameterized by `x` alone.
    pub const IDP_TYPES: [ThreeType; 7] = [
        ThreeType::I,
        ThreeType::Ii,
        ThreeType::Iii,
        ThreeType::Iv,
        ThreeType::V,
        ThreeType::Vi,
        ThreeType::Vii,
    ];

    /// `(r_1 | r_2, r_1 | r_3, r_2 | r_3)` for supports of this type.
    pub fn pattern(self) -> (bool, bool, bool) {
        match self {
            ThreeType::I => (true, true, true),
            ThreeType::Ii => (false, true, true),
            ThreeType::Iii => (false, false, true),
            ThreeType::Iv => (true, true, false),
            ThreeType::V | ThreeType::Viii => (false, true, false),
            ThreeType::Vi => (false, false, false),
            ThreeType::Vii => (true, false, false),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            ThreeType::I => "i",
            ThreeType::Ii => "ii",
            ThreeType::Iii => "iii",
            ThreeType::Iv => "iv",
            ThreeType::V => "v",
            ThreeType::Vi => "vi",
            ThreeType::Vii => "vii",
            ThreeType::Viii => "viii",
        }
    }
}

impl fmt::Display for ThreeType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Name of a generator, as accepted on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum FamilyKind {
    OneSupp,
    TwoSupp1,
    TwoSupp2,
    ThreeSupp(ThreeType),
    FreeSum,
    Boundary1,
    Boundary2,
}

impl FamilyKind {
    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::OneSupp => "one",
            FamilyKind::TwoSupp1 => "two-1",
            FamilyKind::TwoSupp2 => "two-2",
            FamilyKind::ThreeSupp(t) => t.label(),
            FamilyKind::FreeSum => "free-sum",
            FamilyKind::Boundary1 => "boundary-1",
            FamilyKind::Boundary2 => "boundary-2",
        }
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        let kind = match t.as_str() {
            "one" | "1" => FamilyKind::OneSupp,
            "two-1" | "2-1" => FamilyKind::TwoSupp1,
            "two-2" | "2-2" => FamilyKind::TwoSupp2,
            "free-sum" | "freesum" => FamilyKind::FreeSum,
            "boundary-1" | "boundary1" => FamilyKind::Boundary1,
            "boundary-2" | "boundary2" => FamilyKind::Boundary2,
            other => {
                let other = other.strip_prefix("three-").unwrap_or(other);
                match ThreeType::ALL.iter().find(|t| t.label() == other) {
                    Some(&t) => FamilyKind::ThreeSupp(t),
                    None => return Err(Error::parse(s, "unknown family kind")),
                }
            }
        };
        Ok(kind)
    }
}

/// A generator together with its parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilySpec {
    /// `(1^x)`.
    OneSupp { x: u128 },
    /// `(1^{x_1}, (1+x_1)^{x_2})`.
    TwoSupp1 { x: [u128; 2] },
    /// `((1+x_2)^{x_1}, (1+(1+x_2)x_1)^{x_2})`.
    TwoSupp2 { x: [u128; 2] },
    /// Types (i)-(vii), parameterized by the multiplicity vector.
    ThreeSupp { kind: ThreeType, x: [u128; 3] },
    /// Type (viii); `x_3 = s k x_2 + s - k + 1` is derived, never supplied.
    ThreeSuppViii { x1: u128, x2: u128, k: u128, s: u128 },
    FreeSum { p: WeightVector, w: WeightVector },
    /// `(1^{2n-1}, 3n, 10n, 15n)`, `n >= 1`.
    Boundary1 { n: u128 },
    /// `(n, (2n-1)(n+1), (2n(n+1))^{2(n-1)})`, `n >= 2`.
    Boundary2 { n: u128 },
}

impl FamilySpec {
    pub fn kind(&self) -> FamilyKind {
        match self {
            FamilySpec::OneSupp { .. } => FamilyKind::OneSupp,
            FamilySpec::TwoSupp1 { .. } => FamilyKind::TwoSupp1,
            FamilySpec::TwoSupp2 { .. } => FamilyKind::TwoSupp2,
            FamilySpec::ThreeSupp { kind, .. } => FamilyKind::ThreeSupp(*kind),
            FamilySpec::ThreeSuppViii { .. } => FamilyKind::ThreeSupp(ThreeType::Viii),
            FamilySpec::FreeSum { .. } => FamilyKind::FreeSum,
            FamilySpec::Boundary1 { .. } => FamilyKind::Boundary1,
            FamilySpec::Boundary2 { .. } => FamilyKind::Boundary2,
        }
    }
}

fn positive(values: &[u128]) -> Result<()> {
    if values.iter().any(|&v| v == 0) {
        return Err(Error::InvalidParams("family parameters must be positive".into()));
    }
    Ok(())
}

/// Support of a 3-supported type (i)-(vii).
pub fn three_supported_support(kind: ThreeType, x: [u128; 3]) -> Result<[u128; 3]> {
    positive(&x)?;
    let [x1, x2, x3] = x.map(ck);
    let r = match kind {
        ThreeType::I => [ONE, ONE + x1, (ONE + x1) * (ONE + x2)],
        ThreeType::Ii => [
            ONE + x2,
            ONE + x1 * (ONE + x2),
            (ONE + x1 * (ONE + x2)) * (ONE + x2),
        ],
        ThreeType::Iii => [
            (ONE + x2) * (ONE + x3),
            ONE + x1 * (ONE + x2) * (ONE + x3),
            (ONE + x1 * (ONE + x2) * (ONE + x3)) * (ONE + x2),
        ],
        ThreeType::Iv => [
            ONE,
            (ONE + x1) * (ONE + x3),
            (ONE + x1) * (ONE + x2 * (ONE + x3)),
        ],
        ThreeType::V => [
            ONE + (ONE + x3) * x2,
            (ONE + x3) * (ONE + x1 * (ONE + (ONE + x3) * x2)),
            (ONE + (ONE + (ONE + x3) * x2) * x1) * (ONE + (ONE + x3) * x2),
        ],
        ThreeType::Vi => [
            (ONE + x3) * (ONE + (ONE + x3) * x2),
            (ONE + x3) * (ONE + x1 * (ONE + x3) * (ONE + (ONE + x3) * x2)),
            (ONE + (ONE + x3) * (ONE + (ONE + x3) * x2) * x1) * (ONE + (ONE + x3) * x2),
        ],
        ThreeType::Vii => [
            ONE + x3,
            (ONE + x3) * (ONE + x1 * (ONE + x3)),
            (ONE + (ONE + x3) * x1) * (ONE + (ONE + x3) * x2),
        ],
        ThreeType::Viii => {
            return Err(Error::InvalidParams(
                "type viii takes (x1, x2, k, s), not a multiplicity vector".into(),
            ))
        }
    };
    Ok([r[0].get()?, r[1].get()?, r[2].get()?])
}

/// Support and multiplicity of type (viii).
pub fn type_viii_form(x1: u128, x2: u128, k: u128, s: u128) -> Result<([u128; 3], [u128; 3])> {
    positive(&[x1, x2, k, s])?;
    let (cx1, cx2, ck_, cs) = (ck(x1), ck(x2), ck(k), ck(s));
    let skx2 = cs * ck_ * cx2;
    let b = skx2 + cs + ck_;
    let r1 = ONE + ck_ * cx2;
    let r = [
        r1,
        b * (ONE + cx1 * r1),
        (ONE + cx1 * r1) * (ONE + cx2 * b),
    ];
    // s k x2 >= k, so the subtraction cannot underflow.
    let x3 = (skx2 + cs + ONE).get()? - k;
    Ok(([r[0].get()?, r[1].get()?, r[2].get()?], [x1, x2, x3]))
}

fn from_form(support: Vec<u128>, multiplicity: Vec<u128>) -> Result<WeightVector> {
    WeightVector::from_support_form(SupportForm::new(support, multiplicity)?)
}

fn require_reflexive(q: WeightVector) -> Result<WeightVector> {
    if is_reflexive(&q) {
        Ok(q)
    } else {
        Err(Error::NotReflexive(q.to_string()))
    }
}

/// `(p, N(p) w)`, defined for reflexive `p` and `w`.
pub fn affine_free_sum(p: &WeightVector, w: &WeightVector) -> Result<WeightVector> {
    for operand in [p, w] {
        if !is_reflexive(operand) {
            return Err(Error::NotReflexive(operand.to_string()));
        }
    }
    let scale = p.normalized_volume();
    let scaled = w
        .runs()
        .map(|(r, x)| Ok((r.checked_mul(scale).ok_or(Error::Overflow("free sum"))?, x)))
        .collect::<Result<Vec<_>>>()?;
    WeightVector::from_runs(p.runs().chain(scaled))
}

/// `(1^{2n-1}, 3n, 10n, 15n)`.
pub fn boundary_family_1(n: u128) -> Result<WeightVector> {
    if n == 0 {
        return Err(Error::InvalidParams("boundary family 1 needs n >= 1".into()));
    }
    let n = ck(n);
    from_form(
        vec![1, (ck(3) * n).get()?, (ck(10) * n).get()?, (ck(15) * n).get()?],
        vec![(ck(2) * n).get()? - 1, 1, 1, 1],
    )
}

/// `(n, (2n-1)(n+1), (2n(n+1))^{2(n-1)})`.
pub fn boundary_family_2(n: u128) -> Result<WeightVector> {
    if n < 2 {
        return Err(Error::InvalidParams("boundary family 2 needs n >= 2".into()));
    }
    let cn = ck(n);
    let middle = ((ck(2) * cn).get()? - 1) * (cn + ONE).get()?;
    let top = (ck(2) * cn * (cn + ONE)).get()?;
    from_form(vec![n, middle, top], vec![1, 1, 2 * (n - 1)])
}

/// Builds the weight vector for `spec`.
pub fn generate(spec: &FamilySpec) -> Result<WeightVector> {
    let q = match spec {
        FamilySpec::OneSupp { x } => {
            positive(&[*x])?;
            from_form(vec![1], vec![*x])?
        }
        FamilySpec::TwoSupp1 { x } => {
            positive(x)?;
            from_form(vec![1, (ONE + ck(x[0])).get()?], x.to_vec())?
        }
        FamilySpec::TwoSupp2 { x } => {
            positive(x)?;
            let (x1, x2) = (ck(x[0]), ck(x[1]));
            from_form(
                vec![(ONE + x2).get()?, (ONE + (ONE + x2) * x1).get()?],
                x.to_vec(),
            )?
        }
        FamilySpec::ThreeSupp { kind, x } => {
            let r = three_supported_support(*kind, *x)?;
            from_form(r.to_vec(), x.to_vec())?
        }
        FamilySpec::ThreeSuppViii { x1, x2, k, s } => {
            let (r, x) = type_viii_form(*x1, *x2, *k, *s)?;
            from_form(r.to_vec(), x.to_vec())?
        }
        FamilySpec::FreeSum { p, w } => affine_free_sum(p, w)?,
        FamilySpec::Boundary1 { n } => boundary_family_1(*n)?,
        FamilySpec::Boundary2 { n } => boundary_family_2(*n)?,
    };
    require_reflexive(q)
}

/// Divisibility triple of a 3-entry support and the types sharing it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DivisibilityPattern {
    pub r1_divides_r2: bool,
    pub r1_divides_r3: bool,
    pub r2_divides_r3: bool,
    pub types: Vec<ThreeType>,
}

pub fn divisibility_pattern(r: &[u128]) -> Result<DivisibilityPattern> {
    let [r1, r2, r3] = <[u128; 3]>::try_from(r)
        .map_err(|_| Error::InvalidParams(format!("expected 3 support entries, got {}", r.len())))?;
    if r1 == 0 || r2 == 0 || r3 == 0 {
        return Err(Error::NonPositive);
    }
    if !(r1 < r2 && r2 < r3) {
        return Err(Error::InvalidParams("support must be strictly increasing".into()));
    }
    let triple = (r2 % r1 == 0, r3 % r1 == 0, r3 % r2 == 0);
    Ok(DivisibilityPattern {
        r1_divides_r2: triple.0,
        r1_divides_r3: triple.1,
        r2_divides_r3: triple.2,
        types: ThreeType::ALL
            .into_iter()
            .filter(|t| t.pattern() == triple)
            .collect(),
    })
}

/// Parses a comma-separated list of positive integers such as `1,2,3`.
pub fn parse_params(text: &str) -> Result<Vec<u128>> {
    if text.trim().is_empty() {
        return Err(Error::parse(text, "no parameters"));
    }
    text.split(',')
        .map(|t| {
            let t = t.trim();
            if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) {
                return Err(Error::parse(text, format!("{t:?} is not a positive integer")));
            }
            match t.parse::<u128>() {
                Ok(0) => Err(Error::NonPositive),
                Ok(v) => Ok(v),
                Err(_) => Err(Error::Overflow("parameter")),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::parse_weights;

    fn q(s: &str) -> WeightVector {
        parse_weights(s).unwrap()
    }

    #[test]
    fn generate_examples() {
        let v = generate(&FamilySpec::TwoSupp2 { x: [1, 1] }).unwrap();
        assert_eq!(v, q("2,3"));
        assert_eq!(v.normalized_volume(), 6);

        let v = generate(&FamilySpec::ThreeSupp {
            kind: ThreeType::I,
            x: [1, 1, 1],
        })
        .unwrap();
        assert_eq!(v, q("1,2,4"));

        let v = generate(&FamilySpec::ThreeSuppViii {
            x1: 1,
            x2: 1,
            k: 1,
            s: 1,
        })
        .unwrap();
        assert_eq!(v, q("2,9,12,12"));
        assert_eq!(v.support_form().multiplicity(), &[1, 1, 2]);

        assert_eq!(generate(&FamilySpec::OneSupp { x: 4 }).unwrap(), q("1^4"));
        assert_eq!(
            generate(&FamilySpec::TwoSupp1 { x: [2, 3] }).unwrap(),
            q("1,1,3,3,3")
        );
    }

    #[test]
    fn viii_with_k_two_is_rejected() {
        // The closed form stops being reflexive once k >= 2.
        let (r, x) = type_viii_form(1, 1, 2, 1).unwrap();
        assert_eq!((r, x), ([3, 20, 24], [1, 1, 2]));
        assert!(matches!(
            generate(&FamilySpec::ThreeSuppViii { x1: 1, x2: 1, k: 2, s: 1 }),
            Err(Error::NotReflexive(_))
        ));
    }

    #[test]
    fn rejects_bad_params() {
        assert!(generate(&FamilySpec::OneSupp { x: 0 }).is_err());
        assert!(generate(&FamilySpec::ThreeSupp {
            kind: ThreeType::Ii,
            x: [1, 0, 1]
        })
        .is_err());
        assert!(three_supported_support(ThreeType::Viii, [1, 1, 1]).is_err());
        assert!(matches!(
            three_supported_support(ThreeType::Vi, [u128::MAX / 2, 3, 3]),
            Err(Error::Overflow(_))
        ));
        assert!(boundary_family_1(0).is_err());
        assert!(boundary_family_2(1).is_err());
    }

    #[test]
    fn free_sum_examples() {
        assert_eq!(affine_free_sum(&q("1"), &q("1")).unwrap(), q("1,2"));
        assert_eq!(affine_free_sum(&q("1,1"), &q("1,1")).unwrap(), q("1,1,3,3"));
        assert_eq!(affine_free_sum(&q("1"), &q("1,2")).unwrap(), q("1,2,4"));
        assert!(matches!(
            affine_free_sum(&q("2,2,3"), &q("1")),
            Err(Error::NotReflexive(_))
        ));
        assert!(affine_free_sum(&q("1"), &q("2,2,3")).is_err());
    }

    #[test]
    fn pattern_examples() {
        let p = divisibility_pattern(&[1, 2, 4]).unwrap();
        assert_eq!((p.r1_divides_r2, p.r1_divides_r3, p.r2_divides_r3), (true, true, true));
        assert_eq!(p.types, vec![ThreeType::I]);

        let p = divisibility_pattern(&[2, 9, 12]).unwrap();
        assert_eq!((p.r1_divides_r2, p.r1_divides_r3, p.r2_divides_r3), (false, true, false));
        assert_eq!(p.types, vec![ThreeType::V, ThreeType::Viii]);

        let p = divisibility_pattern(&[2, 3, 6]).unwrap();
        assert_eq!(p.types, vec![ThreeType::Ii]);

        // r1 | r2 | r3 forces r1 | r3, so (T, F, T) names no type.
        assert!(divisibility_pattern(&[2, 4, 6]).unwrap().types.len() == 1);
        assert!(divisibility_pattern(&[1, 2]).is_err());
        assert!(divisibility_pattern(&[3, 2, 5]).is_err());
    }

    #[test]
    fn boundary_examples() {
        assert_eq!(boundary_family_1(2).unwrap(), q("1,1,1,6,20,30"));
        assert_eq!(boundary_family_1(1).unwrap(), q("1,3,10,15"));
        assert_eq!(boundary_family_1(3).unwrap(), q("1^5,9,30,45"));
        assert_eq!(boundary_family_2(2).unwrap(), q("2,9,12,12"));
        assert_eq!(boundary_family_2(3).unwrap(), q("3,20,24,24,24,24"));
        assert_eq!(boundary_family_2(4).unwrap(), q("4,35,40^6"));
    }

    #[test]
    fn boundary_two_meets_viii_only_at_n_two() {
        let viii = generate(&FamilySpec::ThreeSuppViii { x1: 1, x2: 1, k: 1, s: 1 }).unwrap();
        assert_eq!(boundary_family_2(2).unwrap(), viii);
        for n in 3..=12u128 {
            let b = boundary_family_2(n).unwrap();
            let x = b.support_form().multiplicity().to_vec();
            // Type (viii) with matching x1 = x2 = 1 needs x3 = s k + s - k + 1 = 2(n-1).
            for k in 1..=2 * n {
                for s in 1..=2 * n {
                    if let Ok((r, xv)) = type_viii_form(x[0], x[1], k, s) {
                        assert!(
                            !(r.as_slice() == b.support_form().support() && xv.as_slice() == x.as_slice()),
                            "n={n} k={k} s={s}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn kind_parsing() {
        assert_eq!("viii".parse::<FamilyKind>().unwrap(), FamilyKind::ThreeSupp(ThreeType::Viii));
        assert_eq!("three-iv".parse::<FamilyKind>().unwrap(), FamilyKind::ThreeSupp(ThreeType::Iv));
        assert_eq!("two-2".parse::<FamilyKind>().unwrap(), FamilyKind::TwoSupp2);
        assert_eq!("Boundary-1".parse::<FamilyKind>().unwrap(), FamilyKind::Boundary1);
        assert!("ix".parse::<FamilyKind>().is_err());
        for t in ThreeType::ALL {
            let k = FamilyKind::ThreeSupp(t);
            assert_eq!(k.name().parse::<FamilyKind>().unwrap(), k);
        }
    }

    #[test]
    fn param_parsing() {
        assert_eq!(parse_params("1,2,3").unwrap(), vec![1, 2, 3]);
        assert_eq!(parse_params(" 4 ").unwrap(), vec![4]);
        assert!(parse_params("").is_err());
        assert!(parse_params("1,,2").is_err());
        assert!(matches!(parse_params("0"), Err(Error::NonPositive)));
        assert!(parse_params("-1").is_err());
    }
}
