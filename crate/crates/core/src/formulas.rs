//! Closed forms for the sizes of maximal island systems, in exact arithmetic.

use num_rational::Ratio;
use serde::{Serialize, Serializer};

use crate::error::{IslandError, Result};
use crate::geometry::Shape;

pub type Rational = Ratio<i128>;

/// A closed interval `[lower, upper]` of exact rationals.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoundPair {
    pub lower: Rational,
    pub upper: Rational,
}

impl BoundPair {
    pub fn contains(&self, value: u64) -> bool {
        let v = Rational::from_integer(i128::from(value));
        self.lower <= v && v <= self.upper
    }
}

impl Serialize for BoundPair {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("BoundPair", 2)?;
        s.serialize_field("lower", &self.lower.to_string())?;
        s.serialize_field("upper", &self.upper.to_string())?;
        s.end()
    }
}

/// Largest integer not above `r`, for non-negative `r`.
pub fn floor_u64(r: &Rational) -> Result<u64> {
    u64::try_from(r.floor().to_integer()).map_err(|_| IslandError::Overflow("floor of a bound"))
}

fn positive(name: &str, value: u64) -> Result<()> {
    if value == 0 {
        return Err(IslandError::InvalidParameter(format!(
            "{name} must be positive"
        )));
    }
    Ok(())
}

fn overflow(what: &'static str) -> impl Fn() -> IslandError {
    move || IslandError::Overflow(what)
}

/// Minimum size of a maximal brick system: `sum m_i - (d - 1)`.
pub fn g_formula(shape: &Shape) -> Result<u64> {
    let sum = shape
        .dims()
        .iter()
        .try_fold(0u64, |acc, &m| acc.checked_add(u64::from(m)))
        .ok_or_else(overflow("g_d"))?;
    Ok(sum + 1 - shape.dim() as u64)
}

/// Maximum size of a maximal rectangle system: `floor((m1 m2 + m1 + m2 - 1) / 2)`.
pub fn f2_formula(m1: u64, m2: u64) -> Result<u64> {
    positive("m1", m1)?;
    positive("m2", m2)?;
    let total = m1
        .checked_mul(m2)
        .and_then(|p| p.checked_add(m1))
        .and_then(|p| p.checked_add(m2))
        .ok_or_else(overflow("f_2"))?;
    Ok((total - 1) / 2)
}

/// Minimum size of a maximal square system in `[0,m]^2`.
pub fn g2prime_formula(m: u64) -> Result<u64> {
    positive("m", m)?;
    Ok(m)
}

/// Upper bound `m (m + 2) / 3` on the maximum size of a maximal square system.
pub fn f2prime_upper(m: u64) -> Result<Rational> {
    positive("m", m)?;
    let m = i128::from(m);
    let num = m.checked_mul(m + 2).ok_or_else(overflow("f'_2 bound"))?;
    Ok(Rational::new(num, 3))
}

/// Known bounds on the maximum size of a maximal brick system:
/// `(prod m_i + sum over (d-1)-subsets of prod) / 2^(d-1) - 1` and
/// `prod (m_i + 1) / 2^(d-1) - 1`.
pub fn pluhar_bounds(shape: &Shape) -> Result<BoundPair> {
    const WHAT: &str = "brick-system bounds";
    let dims: Vec<i128> = shape.dims().iter().map(|&m| i128::from(m)).collect();
    let d = dims.len();
    let product = |skip: Option<usize>, shift: i128| {
        dims.iter()
            .enumerate()
            .filter(|(i, _)| Some(*i) != skip)
            .try_fold(1i128, |acc, (_, &m)| acc.checked_mul(m + shift))
            .ok_or_else(overflow(WHAT))
    };
    let full = product(None, 0)?;
    let faces = (0..d).try_fold(0i128, |acc, i| {
        product(Some(i), 0).and_then(|p| acc.checked_add(p).ok_or_else(overflow(WHAT)))
    })?;
    let scale = 1i128
        .checked_shl(u32::try_from(d - 1).map_err(|_| IslandError::Overflow(WHAT))?)
        .filter(|&s| s > 0)
        .ok_or_else(overflow(WHAT))?;
    let one = Rational::from_integer(1);
    let lower_num = full.checked_add(faces).ok_or_else(overflow(WHAT))?;
    Ok(BoundPair {
        lower: Rational::new(lower_num, scale) - one,
        upper: Rational::new(product(None, 1)?, scale) - one,
    })
}

fn checked_pow(base: i128, exp: u64, what: &'static str) -> Result<i128> {
    let exp = u32::try_from(exp).map_err(|_| IslandError::Overflow(what))?;
    base.checked_pow(exp).ok_or(IslandError::Overflow(what))
}

/// Upper bound `((m + 1)^d - 1) / (2^d - 1)` on the maximum size of a maximal cubic system.
pub fn fprime_upper(d: u64, m: u64) -> Result<Rational> {
    const WHAT: &str = "cubic-system bound";
    positive("d", d)?;
    positive("m", m)?;
    let num = checked_pow(i128::from(m) + 1, d, WHAT)? - 1;
    let den = checked_pow(2, d, WHAT)? - 1;
    Ok(Rational::new(num, den))
}

/// Size of the recursive subdivision system in `[0, 2^k - 1]^d`:
/// `(2^(kd) - 1) / (2^d - 1)`, computed by the recurrence `|H_k| = 2^d |H_(k-1)| + 1`.
pub fn hk_size(d: u64, k: u64) -> Result<u64> {
    const WHAT: &str = "subdivision system size";
    positive("d", d)?;
    positive("k", k)?;
    let d32 = u32::try_from(d).map_err(|_| IslandError::Overflow(WHAT))?;
    let copies = 2u64.checked_pow(d32).ok_or(IslandError::Overflow(WHAT))?;
    let size = (1..k).try_fold(1u64, |h, _| {
        h.checked_mul(copies)
            .and_then(|h| h.checked_add(1))
            .ok_or(IslandError::Overflow(WHAT))
    })?;
    // Cross-check against the closed form where it fits.
    if let Some(num) = d32
        .checked_mul(u32::try_from(k).unwrap_or(u32::MAX))
        .and_then(|e| 2u128.checked_pow(e))
    {
        let den = u128::from(copies) - 1;
        assert_eq!((num - 1) % den, 0, "closed form must divide exactly");
        assert_eq!((num - 1) / den, u128::from(size));
    }
    Ok(size)
}

#[cfg(test)]
mod tests {
    use super::*;
    use itertools::Itertools;

    fn shape(dims: &[u32]) -> Shape {
        Shape::new(dims.to_vec()).unwrap()
    }

    fn r(n: i128, d: i128) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn g_examples() {
        assert_eq!(g_formula(&shape(&[1, 1, 1, 1])).unwrap(), 1);
        assert_eq!(g_formula(&shape(&[5, 3])).unwrap(), 7);
        assert_eq!(g_formula(&shape(&[2, 2, 2])).unwrap(), 4);
    }

    #[test]
    fn f2_examples() {
        assert_eq!(f2_formula(1, 1).unwrap(), 1);
        assert_eq!(f2_formula(2, 2).unwrap(), 3);
        assert_eq!(f2_formula(3, 3).unwrap(), 7);
        assert!(f2_formula(0, 3).is_err());
        assert!(matches!(
            f2_formula(u64::MAX, 2),
            Err(IslandError::Overflow(_))
        ));
    }

    #[test]
    fn square_examples() {
        assert_eq!(g2prime_formula(4).unwrap(), 4);
        assert_eq!(f2prime_upper(3).unwrap(), r(5, 1));
        assert_eq!(f2prime_upper(1).unwrap(), r(1, 1));
        assert_eq!(f2prime_upper(2).unwrap(), r(8, 3));
    }

    #[test]
    fn sandwich_examples() {
        let b = pluhar_bounds(&shape(&[2, 2, 2])).unwrap();
        assert_eq!((b.lower, b.upper), (r(4, 1), r(23, 4)));
        let b = pluhar_bounds(&shape(&[1, 1, 1])).unwrap();
        assert_eq!((b.lower, b.upper), (r(0, 1), r(1, 1)));
        assert!(b.contains(1));
        for (m1, m2) in (1..=6).cartesian_product(1..=6) {
            let b = pluhar_bounds(&shape(&[m1, m2])).unwrap();
            let (m1, m2) = (i128::from(m1), i128::from(m2));
            assert_eq!(b.lower, r(m1 * m2 + m1 + m2, 2) - 1);
            let f2 = f2_formula(m1 as u64, m2 as u64).unwrap();
            assert!(b.contains(f2));
            assert!(b.lower - Rational::from_integer(f2 as i128) <= r(1, 1));
        }
    }

    #[test]
    fn sandwich_lower_not_above_upper() {
        for d in 1..=4usize {
            for dims in (0..d).map(|_| 1..=6u32).multi_cartesian_product() {
                let b = pluhar_bounds(&shape(&dims)).unwrap();
                assert!(b.lower <= b.upper, "{dims:?}");
            }
        }
    }

    #[test]
    fn fprime_examples() {
        assert_eq!(fprime_upper(2, 3).unwrap(), r(5, 1));
        assert_eq!(fprime_upper(3, 3).unwrap(), r(9, 1));
        for d in 1..=8 {
            assert_eq!(fprime_upper(d, 1).unwrap(), r(1, 1));
        }
        assert_eq!(floor_u64(&fprime_upper(2, 2).unwrap()).unwrap(), 2);
        // Agrees with the square bound in the plane.
        for m in 1..=20 {
            assert_eq!(fprime_upper(2, m).unwrap(), f2prime_upper(m).unwrap());
        }
    }

    #[test]
    fn hk_examples() {
        assert_eq!(hk_size(2, 2).unwrap(), 5);
        assert_eq!(hk_size(3, 2).unwrap(), 9);
        assert_eq!(hk_size(3, 3).unwrap(), 73);
        for d in 1..=6 {
            assert_eq!(hk_size(d, 1).unwrap(), 1);
        }
        assert!(matches!(hk_size(64, 2), Err(IslandError::Overflow(_))));
    }

    #[test]
    fn hk_meets_cubic_bound() {
        for (d, k) in (1..=4u64).cartesian_product(1..=4u64) {
            let side = (1u64 << k) - 1;
            let bound = fprime_upper(d, side).unwrap();
            assert!(bound.is_integer());
            assert_eq!(bound.to_integer(), i128::from(hk_size(d, k).unwrap()));
        }
    }

    #[test]
    fn symmetric_in_arguments() {
        for dims in (0..3).map(|_| 1..=4u32).multi_cartesian_product() {
            let g = g_formula(&shape(&dims)).unwrap();
            for p in dims.iter().copied().permutations(3) {
                assert_eq!(g_formula(&shape(&p)).unwrap(), g);
            }
        }
        for (a, b) in (1..=8).cartesian_product(1..=8) {
            assert_eq!(f2_formula(a, b).unwrap(), f2_formula(b, a).unwrap());
        }
    }

    #[test]
    fn bound_pair_serializes_as_fractions() {
        let b = pluhar_bounds(&shape(&[2, 2, 2])).unwrap();
        assert_eq!(
            serde_json::to_string(&b).unwrap(),
            r#"{"lower":"4","upper":"23/4"}"#
        );
    }
}
